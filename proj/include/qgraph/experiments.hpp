#pragma once

// Parameter sweeps over edge lengths / vertex couplings and the star-graph
// critical coupling search.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/ground_state.hpp"

namespace qgraph {

enum class SweepTarget { EdgeLength, VertexAlpha };

const char* to_string(SweepTarget target);

/// steps equally spaced values from lo to hi inclusive.
struct SweepAxis {
  SweepTarget target = SweepTarget::EdgeLength;
  std::string id;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 2;

  double value(int i) const;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;  ///< one or two; the last axis varies fastest
  SolverOptions solver;
  int jobs = 1;
};

/// lo < hi, steps >= 2, target present in the graph, 1 or 2 axes, jobs >= 1.
/// Throws std::invalid_argument.
void validate(const MetricGraph& graph, const SweepSpec& spec);

struct SweepPoint {
  std::vector<int> grid;       ///< position along each axis
  std::vector<double> params;  ///< parameter value along each axis
  std::string status = "ok";   ///< "ok", a SolverErrorKind name, or "invalid_graph"
  std::string message;
  double lambda0 = 0.0;
  double kappa0 = 0.0;
  std::vector<int> indices;    ///< per edge, in GroundState::solutions order
  bool class_change = false;   ///< index vector differs from the previous point on the same line
  Diagnostics diagnostics;

  bool ok() const { return status == "ok"; }
};

struct SweepResult {
  SweepSpec spec;
  std::vector<std::string> edge_order;
  std::vector<SweepPoint> points;  ///< row-major over the axes
};

/// Each grid point is an independent solve; failures are recorded per point.
/// Points run on up to spec.jobs threads and come back in grid order.
SweepResult run_sweep(const MetricGraph& graph, const SweepSpec& spec);

inline constexpr const char* kSweepSchema = "qgraph-sweep/1";

/// Comment lines (schema, axes, edge order), a header row, one row per point.
/// Floats carry 17 significant digits.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

struct CritOptions {
  std::string axial_edge;
  std::string center;          ///< vertex whose coupling is solved for; default: the axial endpoint of higher degree
  double window_lo = 0.5;
  double window_hi = 3.0;
  double alpha_lo = -5.0;
  double alpha_hi = -0.01;
  int bracket_grid = 26;       ///< alpha samples used to find the sign change
  int flatness_grid = 26;      ///< window samples used for the flatness check
  double tol_alpha = 1e-13;
  SolverOptions solver = [] {
    SolverOptions o;
    o.tol_kappa = 1e-14;
    return o;
  }();
  std::function<void(const GroundState&)> on_solve;  ///< sees every ground state computed
};

struct CritResult {
  double alpha_crit = 0.0;
  std::string center;
  double flatness = 0.0;    ///< max |lambda0(L) - lambda0(window_lo)| over the window grid
  double max_slope = 0.0;   ///< max finite-difference |d lambda0 / dL| over the window grid
  EdgeIndex axial_index = EdgeIndex::Exponential;
  double axial_imbalance = 0.0;  ///< ||a| - |b|| / max(|a|, |b|) on the axial edge at window_lo
  double lambda0 = 0.0;          ///< at alpha_crit, L = window_lo
  int iterations = 0;
};

/// Root of g(alpha) = lambda0(alpha, window_hi) - lambda0(alpha, window_lo)
/// by Illinois false position inside the first sign change on the bracket
/// grid. Throws std::invalid_argument for a bad setup and SolverError(NoRoot)
/// when g keeps one sign.
CritResult find_critical_coupling(const MetricGraph& graph, const CritOptions& options);

}  // namespace qgraph
