#pragma once

// Trial functions and the quadratic form
//
//   q[psi] = sum_edges int |psi'|^2 dx + sum_vertices alpha_v |psi(v)|^2.
//
// A trial function is piecewise a finite sum of exponentials
// coef * exp(rate * (x - origin)); constants, decaying tails, cosh/sinh
// profiles and their rescalings all fit, and every integral is exact.

#include <string_view>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/ground_state.hpp"

namespace qgraph {

struct ExpTerm {
  double coef = 0.0;
  double rate = 0.0;
  double origin = 0.0;
};

/// Smooth piece on [begin, end] of an edge coordinate; end may be +inf on a lead.
struct TrialPiece {
  double begin = 0.0;
  double end = 0.0;
  std::vector<ExpTerm> terms;

  double value(double x) const;
  double derivative(double x) const;
};

/// Pieces must tile the edge in order: [0, x1], [x1, x2], ..., [x_k, l or inf].
struct EdgeTrial {
  std::vector<TrialPiece> pieces;

  double value(double x) const;
};

struct TrialFunction {
  std::vector<EdgeTrial> finite;    ///< parallel to graph.finite_edges
  std::vector<EdgeTrial> infinite;  ///< parallel to graph.infinite_edges

  static TrialFunction from_ground_state(const MetricGraph& graph, const GroundState& gs);
  /// `value` on every finite edge, value * exp(-tail_rate x) on leads.
  static TrialFunction constant(const MetricGraph& graph, double value, double tail_rate);
};

struct QuadraticForm {
  double dirichlet = 0.0;  ///< sum of edge integrals of |psi'|^2
  double vertex = 0.0;     ///< sum of alpha_v |psi(v)|^2
  double norm_squared = 0.0;

  double value() const { return dirichlet + vertex; }
  double quotient() const { return value() / norm_squared; }
};

/// Throws std::invalid_argument for a trial that does not tile its edges, is
/// discontinuous at a vertex or piece boundary, or is not square-integrable.
QuadraticForm quadratic_form(const MetricGraph& graph, const TrialFunction& trial);

/// q[psi] / ||psi||^2; throws std::invalid_argument on a zero-norm trial.
double rayleigh_quotient(const MetricGraph& graph, const TrialFunction& trial);

/// Split of the normalized ground state between a segment J of one finite edge
/// and the rest of the graph:
///   outside_form = q restricted to Gamma \ J,   inside_dirichlet = int_J |psi'|^2,
///   outside_norm = ||psi||^2 on Gamma \ J,      inside_norm = int_J |psi|^2.
/// Stretching J by xi gives the quotient (outside_form + inside_dirichlet / xi) /
/// (outside_norm + inside_norm * xi).
struct ScaledTrialParts {
  double outside_form = 0.0;
  double inside_dirichlet = 0.0;
  double outside_norm = 0.0;
  double inside_norm = 0.0;
  double segment_begin = 0.0;
  double segment_end = 0.0;

  double operator()(double xi) const;
};

inline constexpr double kDefaultCollar = 0.1;

/// J is the edge minus a collar of `collar * length` at each end (middle 80% by default).
ScaledTrialParts scaled_trial_parts(const MetricGraph& graph, const GroundState& gs,
                                    std::string_view edge_id, double collar = kDefaultCollar);

/// Throws std::invalid_argument for xi <= 0 or a lead / unknown edge.
double scaled_trial_quotient(const MetricGraph& graph, const GroundState& gs,
                             std::string_view edge_id, double xi, double collar = kDefaultCollar);

/// The same construction as an explicit trial on the stretched graph, for
/// evaluation through rayleigh_quotient.
struct StretchedTrial {
  MetricGraph graph;
  TrialFunction trial;
};

StretchedTrial stretched_trial(const MetricGraph& graph, const GroundState& gs,
                               std::string_view edge_id, double xi, double collar = kDefaultCollar);

}  // namespace qgraph
