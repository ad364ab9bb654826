#pragma once

// Secular system of a delta-coupled metric graph at energy -kappa^2.
//
// Unknowns use an overflow-safe exponential basis instead of cosh/sinh:
//
//   finite edge j:  psi_j(x) = p_j exp(-kappa x) + q_j exp(-kappa (l_j - x)),  0 <= x <= l_j
//   lead k:         psi_k(x) = c_k exp(-kappa x)
//
// Every basis function is bounded by one on its edge, so the matrix entries
// stay O(max(1, kappa)) no matter how large kappa * l becomes. Each vertex of
// degree n contributes n - 1 continuity rows and one row
//   sum of outward derivatives - alpha * psi(vertex) = 0.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"

namespace qgraph {

enum class RowKind { Continuity, DerivativeSum };

struct RowLabel {
  std::size_t vertex;
  RowKind kind;
};

enum class Coefficient {
  Decaying,  ///< p: exp(-kappa x) on a finite edge
  Growing,   ///< q: exp(-kappa (l - x)) on a finite edge
  Lead,      ///< c: exp(-kappa x) on a lead
};

struct ColumnLabel {
  std::size_t edge;  ///< index into finite_edges or infinite_edges
  Coefficient coefficient;
};

struct SecularMatrix {
  double kappa = 0.0;
  Eigen::MatrixXd entries;
  std::vector<RowLabel> rows;
  std::vector<ColumnLabel> columns;
};

/// Precomputed incidence structure; build() is cheap enough for scanning.
class SecularSystem {
 public:
  /// Throws InvalidGraph.
  explicit SecularSystem(MetricGraph graph);

  const MetricGraph& graph() const noexcept { return graph_; }
  std::size_t dimension() const noexcept { return columns_.size(); }
  const std::vector<RowLabel>& rows() const noexcept { return rows_; }
  const std::vector<ColumnLabel>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Incidence>>& vertex_incidences() const noexcept { return incidences_; }

  /// Column of the coefficient p (or c for leads) of an edge; q sits at +1.
  std::size_t column_of(const Incidence& inc) const noexcept;

  SecularMatrix build(double kappa) const;
  void fill(double kappa, Eigen::MatrixXd& out) const;

  /// Row-equilibrated determinant (see singularity_indicator).
  double indicator(double kappa) const;

 private:
  MetricGraph graph_;
  std::vector<std::vector<Incidence>> incidences_;
  std::vector<RowLabel> rows_;
  std::vector<ColumnLabel> columns_;
  std::vector<std::size_t> finite_column_;
  std::vector<std::size_t> lead_column_;
};

/// Throws InvalidGraph for inadmissible graphs and std::invalid_argument for kappa <= 0.
SecularMatrix build_secular_matrix(const MetricGraph& graph, double kappa);

/// Determinant after scaling every row to unit max-norm. Positive row scales
/// keep the sign, so the value is continuous in kappa and vanishes exactly
/// where M(kappa) is singular.
double singularity_indicator(const SecularMatrix& m);
double singularity_indicator(Eigen::MatrixXd m);

/// Value and outward derivative of a basis coefficient at an edge end.
struct EndTrace {
  double value_p, value_q;            ///< contributions of p and q (finite) or c (value_p only)
  double derivative_p, derivative_q;  ///< outward derivative contributions
};

EndTrace end_trace(double kappa, double length, bool finite, bool at_start);

/// Upper bound on the ground-state kappa0: the smallest kappa for which every
/// vertex satisfies sum_e kappa tanh(kappa l_e / 2) >= |alpha_v| (tanh -> 1 on
/// leads). Above it the quadratic form is bounded below by -kappa^2.
double kappa_upper_bound(const MetricGraph& graph);

}  // namespace qgraph
