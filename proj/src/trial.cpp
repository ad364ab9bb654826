#include "qgraph/trial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qgraph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kContinuityTolerance = 1e-9;

double term_value(const ExpTerm& t, double x) {
  if (t.rate == 0.0) return t.coef;
  return t.coef * std::exp(t.rate * (x - t.origin));
}

// Exact integral of exp(r1 (x - o1) + r2 (x - o2)) over [x0, x1].
double pair_integral(const ExpTerm& s, const ExpTerm& t, double x0, double x1) {
  const double rate = s.rate + t.rate;
  auto exponent = [&](double x) {
    double e = 0.0;
    if (s.rate != 0.0) e += s.rate * (x - s.origin);
    if (t.rate != 0.0) e += t.rate * (x - t.origin);
    return e;
  };
  if (std::isinf(x1)) {
    if (!(rate < 0.0)) throw std::invalid_argument("trial function is not square-integrable on a lead");
    return std::exp(exponent(x0)) / -rate;
  }
  const double width = x1 - x0;
  if (rate == 0.0) return std::exp(exponent(x0)) * width;
  const double top = std::max(exponent(x0), exponent(x1));
  return std::exp(top) * -std::expm1(-std::abs(rate) * width) / std::abs(rate);
}

struct PieceIntegrals {
  double norm = 0.0;
  double dirichlet = 0.0;
};

PieceIntegrals integrate(const TrialPiece& piece) {
  PieceIntegrals out;
  for (const auto& s : piece.terms) {
    if (s.coef == 0.0) continue;
    for (const auto& t : piece.terms) {
      if (t.coef == 0.0) continue;
      const double base = s.coef * t.coef * pair_integral(s, t, piece.begin, piece.end);
      out.norm += base;
      out.dirichlet += s.rate * t.rate * base;
    }
  }
  return out;
}

void check_tiling(const EdgeTrial& trial, double length, const std::string& edge) {
  if (trial.pieces.empty()) throw std::invalid_argument("edge '" + edge + "' has no trial pieces");
  if (trial.pieces.front().begin != 0.0) {
    throw std::invalid_argument("trial on edge '" + edge + "' must start at x = 0");
  }
  for (std::size_t i = 0; i < trial.pieces.size(); ++i) {
    const auto& piece = trial.pieces[i];
    if (!(piece.end > piece.begin)) throw std::invalid_argument("empty trial piece on edge '" + edge + "'");
    if (i + 1 < trial.pieces.size()) {
      const auto& next = trial.pieces[i + 1];
      if (next.begin != piece.end) throw std::invalid_argument("trial pieces on edge '" + edge + "' do not tile");
      const double left = piece.value(piece.end), right = next.value(next.begin);
      if (std::abs(left - right) > kContinuityTolerance * std::max({1.0, std::abs(left), std::abs(right)})) {
        throw std::invalid_argument("trial is discontinuous inside edge '" + edge + "'");
      }
    }
  }
  const double end = trial.pieces.back().end;
  const bool matches = std::isinf(length) ? std::isinf(end)
                                          : std::abs(end - length) <= 1e-12 * std::max(1.0, length);
  if (!matches) throw std::invalid_argument("trial on edge '" + edge + "' does not cover the edge");
}

}  // namespace

double TrialPiece::value(double x) const {
  double sum = 0.0;
  for (const auto& t : terms) sum += term_value(t, x);
  return sum;
}

double TrialPiece::derivative(double x) const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.rate * term_value(t, x);
  return sum;
}

double EdgeTrial::value(double x) const {
  for (const auto& piece : pieces) {
    if (x <= piece.end) return piece.value(x);
  }
  return pieces.back().value(x);
}

TrialFunction TrialFunction::from_ground_state(const MetricGraph& graph, const GroundState& gs) {
  TrialFunction trial;
  const double kappa = gs.kappa0;
  for (std::size_t e = 0; e < graph.finite_edges.size(); ++e) {
    const auto& s = gs.solutions.at(e);
    trial.finite.push_back({{TrialPiece{0.0, s.length, {{s.p, -kappa, 0.0}, {s.q, kappa, s.length}}}}});
  }
  for (std::size_t e = 0; e < graph.infinite_edges.size(); ++e) {
    const auto& s = gs.solutions.at(graph.finite_edges.size() + e);
    trial.infinite.push_back({{TrialPiece{0.0, kInf, {{s.c, -kappa, 0.0}}}}});
  }
  return trial;
}

TrialFunction TrialFunction::constant(const MetricGraph& graph, double value, double tail_rate) {
  TrialFunction trial;
  for (const auto& e : graph.finite_edges) {
    trial.finite.push_back({{TrialPiece{0.0, e.length, {{value, 0.0, 0.0}}}}});
  }
  for (std::size_t e = 0; e < graph.infinite_edges.size(); ++e) {
    trial.infinite.push_back({{TrialPiece{0.0, kInf, {{value, -tail_rate, 0.0}}}}});
  }
  return trial;
}

QuadraticForm quadratic_form(const MetricGraph& graph, const TrialFunction& trial) {
  if (trial.finite.size() != graph.finite_edges.size() ||
      trial.infinite.size() != graph.infinite_edges.size()) {
    throw std::invalid_argument("trial function does not match the graph's edges");
  }
  QuadraticForm form;
  for (std::size_t e = 0; e < graph.finite_edges.size(); ++e) {
    check_tiling(trial.finite[e], graph.finite_edges[e].length, graph.finite_edges[e].id);
    for (const auto& piece : trial.finite[e].pieces) {
      const auto parts = integrate(piece);
      form.norm_squared += parts.norm;
      form.dirichlet += parts.dirichlet;
    }
  }
  for (std::size_t e = 0; e < graph.infinite_edges.size(); ++e) {
    check_tiling(trial.infinite[e], kInf, graph.infinite_edges[e].id);
    for (const auto& piece : trial.infinite[e].pieces) {
      const auto parts = integrate(piece);
      form.norm_squared += parts.norm;
      form.dirichlet += parts.dirichlet;
    }
  }

  const auto incs = incidences(graph);
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    if (incs[v].empty()) continue;
    std::vector<double> values;
    for (const auto& inc : incs[v]) {
      if (inc.finite) {
        const auto& pieces = trial.finite[inc.edge].pieces;
        values.push_back(inc.at_start ? pieces.front().value(0.0)
                                      : pieces.back().value(graph.finite_edges[inc.edge].length));
      } else {
        values.push_back(trial.infinite[inc.edge].pieces.front().value(0.0));
      }
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*hi - *lo > kContinuityTolerance * std::max({1.0, std::abs(*lo), std::abs(*hi)})) {
      throw std::invalid_argument("trial is discontinuous at vertex '" + graph.vertices[v].id + "'");
    }
    double mean = 0.0;
    for (double x : values) mean += x;
    mean /= static_cast<double>(values.size());
    form.vertex += graph.vertices[v].alpha * mean * mean;
  }
  return form;
}

double rayleigh_quotient(const MetricGraph& graph, const TrialFunction& trial) {
  const auto form = quadratic_form(graph, trial);
  if (!(form.norm_squared > 0.0)) throw std::invalid_argument("trial function has zero norm");
  return form.quotient();
}

// ---------------------------------------------------------------------------
// Scaled trial

double ScaledTrialParts::operator()(double xi) const {
  if (!(xi > 0.0)) throw std::invalid_argument("scaling factor xi must be positive");
  return (outside_form + inside_dirichlet / xi) / (outside_norm + inside_norm * xi);
}

namespace {

std::size_t finite_edge_or_throw(const MetricGraph& graph, std::string_view edge_id) {
  auto e = graph.find_finite_edge(edge_id);
  if (!e) throw std::invalid_argument("'" + std::string(edge_id) + "' is not a finite edge");
  return *e;
}

void check_collar(double collar) {
  if (!(collar > 0.0 && collar < 0.5)) throw std::invalid_argument("collar must lie in (0, 0.5)");
}

}  // namespace

ScaledTrialParts scaled_trial_parts(const MetricGraph& graph, const GroundState& gs,
                                    std::string_view edge_id, double collar) {
  check_collar(collar);
  const std::size_t target = finite_edge_or_throw(graph, edge_id);

  ScaledTrialParts parts;
  for (std::size_t e = 0; e < gs.solutions.size(); ++e) {
    const auto& s = gs.solutions[e];
    if (e == target) {
      parts.segment_begin = collar * s.length;
      parts.segment_end = (1.0 - collar) * s.length;
      parts.inside_dirichlet = s.dirichlet(parts.segment_begin, parts.segment_end);
      parts.inside_norm = s.norm_squared(parts.segment_begin, parts.segment_end);
      parts.outside_form += s.dirichlet(0.0, parts.segment_begin) + s.dirichlet(parts.segment_end, s.length);
      parts.outside_norm += s.norm_squared(0.0, parts.segment_begin) + s.norm_squared(parts.segment_end, s.length);
    } else {
      parts.outside_form += s.dirichlet();
      parts.outside_norm += s.norm_squared();
    }
  }

  const auto incs = incidences(graph);
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    const auto& inc = incs[v].front();
    const auto& s = gs.solutions[inc.finite ? inc.edge : graph.finite_edges.size() + inc.edge];
    const double value = s.value(inc.at_start ? 0.0 : s.length);
    parts.outside_form += graph.vertices[v].alpha * value * value;
  }
  return parts;
}

double scaled_trial_quotient(const MetricGraph& graph, const GroundState& gs, std::string_view edge_id,
                             double xi, double collar) {
  if (!(xi > 0.0)) throw std::invalid_argument("scaling factor xi must be positive");
  return scaled_trial_parts(graph, gs, edge_id, collar)(xi);
}

StretchedTrial stretched_trial(const MetricGraph& graph, const GroundState& gs, std::string_view edge_id,
                               double xi, double collar) {
  if (!(xi > 0.0)) throw std::invalid_argument("scaling factor xi must be positive");
  check_collar(collar);
  const std::size_t target = finite_edge_or_throw(graph, edge_id);

  const auto& s = gs.solutions.at(target);
  const double j0 = collar * s.length;
  const double j1 = (1.0 - collar) * s.length;
  const double stretch = (xi - 1.0) * (j1 - j0);

  StretchedTrial out{with_edge_length(graph, edge_id, s.length + stretch),
                     TrialFunction::from_ground_state(graph, gs)};

  const std::vector<ExpTerm> base = out.trial.finite[target].pieces.front().terms;
  auto mapped = [&](double rate_factor, auto origin_map) {
    std::vector<ExpTerm> terms;
    for (const auto& t : base) terms.push_back({t.coef, t.rate * rate_factor, origin_map(t.origin)});
    return terms;
  };
  // psi~(j0 + xi y) = psi(j0 + y) on the stretched segment, shifted copy after it.
  TrialPiece head{0.0, j0, base};
  TrialPiece middle{j0, j0 + xi * (j1 - j0),
                    mapped(1.0 / xi, [&](double o) { return j0 - xi * (j0 - o); })};
  TrialPiece tail{middle.end, s.length + stretch, mapped(1.0, [&](double o) { return o + stretch; })};
  out.trial.finite[target].pieces = {head, middle, tail};
  return out;
}

}  // namespace qgraph
