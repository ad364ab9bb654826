#include "qgraph/secular.hpp"

#include <algorithm>
#include <cmath>

namespace qgraph {

SecularSystem::SecularSystem(MetricGraph graph) : graph_(std::move(graph)) {
  require_valid(graph_);
  incidences_ = incidences(graph_);

  finite_column_.resize(graph_.finite_edges.size());
  for (std::size_t e = 0; e < graph_.finite_edges.size(); ++e) {
    finite_column_[e] = columns_.size();
    columns_.push_back({e, Coefficient::Decaying});
    columns_.push_back({e, Coefficient::Growing});
  }
  lead_column_.resize(graph_.infinite_edges.size());
  for (std::size_t e = 0; e < graph_.infinite_edges.size(); ++e) {
    lead_column_[e] = columns_.size();
    columns_.push_back({e, Coefficient::Lead});
  }

  for (std::size_t v = 0; v < incidences_.size(); ++v) {
    for (std::size_t k = 1; k < incidences_[v].size(); ++k) rows_.push_back({v, RowKind::Continuity});
    rows_.push_back({v, RowKind::DerivativeSum});
  }
}

std::size_t SecularSystem::column_of(const Incidence& inc) const noexcept {
  return inc.finite ? finite_column_[inc.edge] : lead_column_[inc.edge];
}

EndTrace end_trace(double kappa, double length, bool finite, bool at_start) {
  if (!finite) return {1.0, 0.0, -kappa, 0.0};
  const double decay = std::exp(-kappa * length);
  if (at_start) return {1.0, decay, -kappa, kappa * decay};
  return {decay, 1.0, kappa * decay, -kappa};
}

void SecularSystem::fill(double kappa, Eigen::MatrixXd& out) const {
  const auto n = static_cast<Eigen::Index>(dimension());
  out.setZero(n, n);

  auto trace = [&](const Incidence& inc) {
    const double length = inc.finite ? graph_.finite_edges[inc.edge].length : 0.0;
    return end_trace(kappa, length, inc.finite, inc.at_start);
  };

  Eigen::Index row = 0;
  for (std::size_t v = 0; v < incidences_.size(); ++v) {
    const auto& incs = incidences_[v];
    const Incidence& first = incs.front();
    const EndTrace t0 = trace(first);
    const auto c0 = static_cast<Eigen::Index>(column_of(first));

    for (std::size_t k = 1; k < incs.size(); ++k, ++row) {
      const EndTrace tk = trace(incs[k]);
      const auto ck = static_cast<Eigen::Index>(column_of(incs[k]));
      out(row, c0) += t0.value_p;
      if (first.finite) out(row, c0 + 1) += t0.value_q;
      out(row, ck) -= tk.value_p;
      if (incs[k].finite) out(row, ck + 1) -= tk.value_q;
    }

    const double alpha = graph_.vertices[v].alpha;
    for (const auto& inc : incs) {
      const EndTrace t = trace(inc);
      const auto c = static_cast<Eigen::Index>(column_of(inc));
      out(row, c) += t.derivative_p;
      if (inc.finite) out(row, c + 1) += t.derivative_q;
    }
    out(row, c0) -= alpha * t0.value_p;
    if (first.finite) out(row, c0 + 1) -= alpha * t0.value_q;
    ++row;
  }
}

SecularMatrix SecularSystem::build(double kappa) const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("kappa must be positive and finite");
  }
  SecularMatrix m;
  m.kappa = kappa;
  fill(kappa, m.entries);
  m.rows = rows_;
  m.columns = columns_;
  return m;
}

double SecularSystem::indicator(double kappa) const {
  Eigen::MatrixXd m;
  fill(kappa, m);
  return singularity_indicator(std::move(m));
}

SecularMatrix build_secular_matrix(const MetricGraph& graph, double kappa) {
  return SecularSystem(graph).build(kappa);
}

double singularity_indicator(Eigen::MatrixXd m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double scale = m.row(r).cwiseAbs().maxCoeff();
    if (scale > 0.0) m.row(r) /= scale;
  }
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

double singularity_indicator(const SecularMatrix& m) { return singularity_indicator(m.entries); }

double kappa_upper_bound(const MetricGraph& graph) {
  const auto incs = incidences(graph);
  double bound = 0.0;
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    const double target = -graph.vertices[v].alpha;
    if (!(target > 0.0) || incs[v].empty()) continue;

    auto capacity = [&](double kappa) {
      double sum = 0.0;
      for (const auto& inc : incs[v]) {
        sum += inc.finite ? kappa * std::tanh(0.5 * kappa * graph.finite_edges[inc.edge].length)
                          : kappa;
      }
      return sum;
    };
    // capacity(kappa) <= degree * kappa, so the root lies above target / degree.
    double lo = target / static_cast<double>(incs[v].size());
    double hi = std::max(2.0 * lo, 1e-300);
    while (capacity(hi) < target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (capacity(mid) < target ? lo : hi) = mid;
    }
    bound = std::max(bound, hi);
  }
  return bound;
}

}  // namespace qgraph
