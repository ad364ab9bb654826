#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/secular.hpp"

namespace qgraph {

enum class SolverErrorKind {
  NoBoundState,
  DegenerateRoot,
  PositivityViolation,
  NoRoot,
  FactorizationFailure,
};

const char* to_string(SolverErrorKind kind);

class SolverError : public std::runtime_error {
 public:
  SolverError(SolverErrorKind kind, const std::string& what);
  SolverErrorKind kind() const noexcept { return kind_; }

 private:
  SolverErrorKind kind_;
};

enum class EdgeKind { Finite, Infinite };

/// Ground-state component on one edge.
///
/// Finite edges carry both the cosh/sinh coefficients (a, b), with
/// psi(x) = a cosh(kappa x) + b sinh(kappa x), and the overflow-safe pair (p, q)
/// used for evaluation. Leads carry psi(x) = c exp(-kappa x).
struct EdgeSolution {
  std::string edge_id;
  EdgeKind kind = EdgeKind::Finite;
  double kappa = 0.0;
  double length = std::numeric_limits<double>::infinity();
  double a = 0.0, b = 0.0;
  double p = 0.0, q = 0.0;
  double c = 0.0;

  double value(double x) const;
  double derivative(double x) const;

  /// Closed-form integrals of psi^2 and psi'^2 over [x0, x1] within the edge.
  double norm_squared(double x0, double x1) const;
  double dirichlet(double x0, double x1) const;
  double norm_squared() const;
  double dirichlet() const;
};

/// Shape of the component: +1 cosh, 0 pure exponential, -1 sinh.
enum class EdgeIndex : int { Sinh = -1, Exponential = 0, Cosh = 1 };

inline int sign_of(EdgeIndex index) { return static_cast<int>(index); }

inline constexpr double kDefaultIndexTolerance = 1e-9;

/// ||a| - |b|| <= eps * max(|a|, |b|) gives 0, otherwise sign(|a| - |b|).
/// Throws std::invalid_argument when a = b = 0.
EdgeIndex classify_edge_index(double a, double b, double eps = kDefaultIndexTolerance);
/// Leads are always 0.
EdgeIndex classify_edge_index(const EdgeSolution& sol, double eps = kDefaultIndexTolerance);

struct SolverOptions {
  double tol_kappa = 1e-12;
  std::optional<double> kappa_max;  ///< default max(sum|alpha|, 1, 1.05 * kappa_upper_bound)
  std::optional<double> scan_step;  ///< default min(1e-2, kappa_max / 1e4)
  double eps_index = kDefaultIndexTolerance;
  int dip_refinements = 3;
  int positivity_samples = 1000;
};

struct Diagnostics {
  double kappa_max = 0.0;
  double scan_step = 0.0;
  int restarts = 0;
  int indicator_evaluations = 0;
  int bisection_steps = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::vector<double> flagged_cells;  ///< upper ends of cells with an unresolved |indicator| dip

  double continuity_residual = 0.0;  ///< max relative continuity mismatch at vertices
  double derivative_residual = 0.0;  ///< max relative |sum psi' - alpha psi|
  double sigma_min = 0.0;            ///< smallest singular value of the equilibrated M(kappa0)
  double sigma_next = 0.0;           ///< second smallest
  double nullspace_gap = 0.0;        ///< sigma_next / sigma_min
  double min_sample = 0.0;           ///< smallest sampled value of the normalized psi on finite edges
};

struct GroundState {
  double kappa0 = 0.0;
  double lambda0 = 0.0;
  std::vector<EdgeSolution> solutions;  ///< finite edges in graph order, then leads
  std::vector<EdgeIndex> indices;       ///< parallel to solutions
  Diagnostics diagnostics;

  const EdgeSolution& solution(std::string_view edge_id) const;
  EdgeIndex index(std::string_view edge_id) const;
  std::vector<int> index_vector() const;
};

/// Largest kappa where the equilibrated determinant vanishes: downward scan
/// from kappa_max, then bisection to tol_kappa. The eigenfunction is
/// reconstructed, made positive and L2-normalized, and every edge classified.
GroundState find_ground_state(const MetricGraph& graph, const SolverOptions& options = {});

/// Null vector of M(kappa0) (right singular vector of the smallest singular
/// value) turned into per-edge solutions, sign-fixed to be positive at the most
/// attractive vertex and normalized. Throws DegenerateRoot or PositivityViolation.
std::vector<EdgeSolution> reconstruct_eigenfunction(const MetricGraph& graph, double kappa0,
                                                    const SolverOptions& options = {});

}  // namespace qgraph
