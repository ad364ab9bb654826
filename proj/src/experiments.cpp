#include "qgraph/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace qgraph {

const char* to_string(SweepTarget target) {
  switch (target) {
    case SweepTarget::EdgeLength: return "length";
    case SweepTarget::VertexAlpha: return "alpha";
  }
  return "unknown";
}

double SweepAxis::value(int i) const {
  if (i == steps - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void validate(const MetricGraph& graph, const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2) throw std::invalid_argument("a sweep needs one or two axes");
  if (spec.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  for (const auto& axis : spec.axes) {
    if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi) || !(axis.lo < axis.hi)) {
      throw std::invalid_argument(fmt::format("sweep range for '{}' needs lo < hi", axis.id));
    }
    if (axis.steps < 2) throw std::invalid_argument(fmt::format("sweep over '{}' needs at least 2 steps", axis.id));
    if (axis.target == SweepTarget::EdgeLength) {
      if (!graph.find_finite_edge(axis.id)) throw std::invalid_argument(fmt::format("no finite edge '{}'", axis.id));
      if (!(axis.lo > 0.0)) throw std::invalid_argument(fmt::format("lengths of '{}' must stay positive", axis.id));
    } else if (!graph.find_vertex(axis.id)) {
      throw std::invalid_argument(fmt::format("no vertex '{}'", axis.id));
    }
  }
  if (spec.axes.size() == 2 && spec.axes[0].target == spec.axes[1].target && spec.axes[0].id == spec.axes[1].id) {
    throw std::invalid_argument("both sweep axes vary the same parameter");
  }
}

namespace {

MetricGraph apply(MetricGraph graph, const SweepAxis& axis, double value) {
  return axis.target == SweepTarget::EdgeLength ? with_edge_length(std::move(graph), axis.id, value)
                                                : with_vertex_alpha(std::move(graph), axis.id, value);
}

void solve_point(const MetricGraph& base, const SweepSpec& spec, SweepPoint& point) {
  MetricGraph g = base;
  for (std::size_t a = 0; a < spec.axes.size(); ++a) g = apply(std::move(g), spec.axes[a], point.params[a]);
  try {
    const auto gs = find_ground_state(g, spec.solver);
    point.lambda0 = gs.lambda0;
    point.kappa0 = gs.kappa0;
    point.indices = gs.index_vector();
    point.diagnostics = gs.diagnostics;
  } catch (const InvalidGraph& e) {
    point.status = "invalid_graph";
    point.message = e.what();
  } catch (const SolverError& e) {
    point.status = to_string(e.kind());
    point.message = e.what();
  }
}

std::vector<std::string> edge_order(const MetricGraph& graph) {
  std::vector<std::string> ids;
  for (const auto& e : graph.finite_edges) ids.push_back(e.id);
  for (const auto& e : graph.infinite_edges) ids.push_back(e.id);
  return ids;
}

std::string join_indices(const std::vector<int>& indices) {
  std::string s;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) s += ';';
    s += fmt::format("{}", indices[i]);
  }
  return s;
}

std::string number(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

SweepResult run_sweep(const MetricGraph& graph, const SweepSpec& spec) {
  require_valid(graph);
  validate(graph, spec);

  SweepResult result;
  result.spec = spec;
  result.edge_order = edge_order(graph);

  const int outer = spec.axes.size() == 2 ? spec.axes[0].steps : 1;
  const int inner = spec.axes.back().steps;
  result.points.resize(static_cast<std::size_t>(outer) * inner);
  for (int i = 0; i < outer; ++i) {
    for (int j = 0; j < inner; ++j) {
      auto& p = result.points[static_cast<std::size_t>(i) * inner + j];
      if (spec.axes.size() == 2) {
        p.grid = {i, j};
        p.params = {spec.axes[0].value(i), spec.axes[1].value(j)};
      } else {
        p.grid = {j};
        p.params = {spec.axes[0].value(j)};
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < result.points.size(); k = next++) solve_point(graph, spec, result.points[k]);
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), result.points.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t k = 1; k < result.points.size(); ++k) {
    auto& p = result.points[k];
    const auto& prev = result.points[k - 1];
    if (p.grid.back() == 0) continue;
    p.class_change = p.ok() && prev.ok() && p.indices != prev.indices;
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  const auto& axes = result.spec.axes;
  fmt::print(out, "# schema: {}\n", kSweepSchema);
  for (std::size_t a = 0; a < axes.size(); ++a) {
    fmt::print(out, "# axis{}: {} {} from {} to {} in {} steps\n", a, to_string(axes[a].target), axes[a].id,
               number(axes[a].lo), number(axes[a].hi), axes[a].steps);
  }
  fmt::print(out, "# edges: {}\n", fmt::join(result.edge_order, ";"));

  if (axes.size() == 2) {
    out << "i0,i1,param0,param1";
  } else {
    out << "i0,param0";
  }
  out << ",status,lambda0,kappa0,log10_abs_lambda0,indices,class_change\n";
  for (const auto& p : result.points) {
    for (int g : p.grid) out << g << ',';
    for (double v : p.params) out << number(v) << ',';
    out << p.status << ',';
    if (p.ok()) {
      out << number(p.lambda0) << ',' << number(p.kappa0) << ',' << number(std::log10(std::abs(p.lambda0)))
          << ',' << join_indices(p.indices);
    } else {
      out << ",,,";
    }
    out << ',' << (p.class_change ? 1 : 0) << '\n';
  }
}

namespace {

struct StarProblem {
  const MetricGraph& base;
  const CritOptions& options;
  std::string center;

  GroundState solve(double alpha, double length) const {
    auto gs = find_ground_state(with_edge_length(with_vertex_alpha(base, center, alpha), options.axial_edge, length),
                                options.solver);
    if (options.on_solve) options.on_solve(gs);
    return gs;
  }
  double gap(double alpha) const {
    return solve(alpha, options.window_hi).lambda0 - solve(alpha, options.window_lo).lambda0;
  }
};

}  // namespace

CritResult find_critical_coupling(const MetricGraph& graph, const CritOptions& options) {
  require_valid(graph);
  const auto axial = graph.find_finite_edge(options.axial_edge);
  if (!axial) throw std::invalid_argument(fmt::format("no finite edge '{}' to use as the axial edge", options.axial_edge));
  if (!(options.window_lo > 0.0) || !(options.window_lo < options.window_hi)) {
    throw std::invalid_argument("length window needs 0 < lo < hi");
  }
  if (!(options.alpha_lo < options.alpha_hi) || options.alpha_hi > 0.0) {
    throw std::invalid_argument("alpha bracket needs lo < hi <= 0");
  }
  if (options.bracket_grid < 2 || options.flatness_grid < 2) throw std::invalid_argument("grids need at least 2 points");

  std::string center = options.center;
  if (center.empty()) {
    const auto& e = graph.finite_edges[*axial];
    center = degree(graph, e.from) >= degree(graph, e.to) ? e.from : e.to;
  } else {
    const auto& e = graph.finite_edges[*axial];
    if (center != e.from && center != e.to) {
      throw std::invalid_argument(fmt::format("center '{}' is not an endpoint of '{}'", center, options.axial_edge));
    }
  }
  const StarProblem problem{graph, options, center};

  // First sign change of g on the bracket grid, scanning up from alpha_lo.
  double a = options.alpha_lo, ga = problem.gap(a);
  double b = a, gb = ga;
  bool bracketed = ga == 0.0;
  for (int i = 1; i < options.bracket_grid && !bracketed; ++i) {
    b = options.alpha_lo + (options.alpha_hi - options.alpha_lo) * i / (options.bracket_grid - 1);
    gb = problem.gap(b);
    if (gb == 0.0 || (ga < 0.0) != (gb < 0.0)) {
      bracketed = true;
    } else {
      a = b;
      ga = gb;
    }
  }
  if (!bracketed) {
    throw SolverError(SolverErrorKind::NoRoot,
                      fmt::format("lambda0(L={}) - lambda0(L={}) keeps one sign for alpha in [{}, {}]",
                                  options.window_hi, options.window_lo, options.alpha_lo, options.alpha_hi));
  }

  CritResult r;
  r.center = center;
  double root = ga == 0.0 ? a : b;
  if (ga != 0.0 && gb != 0.0) {
    // Illinois false position.
    int side = 0;
    for (int it = 0; it < 200 && std::abs(b - a) > options.tol_alpha; ++it) {
      r.iterations = it + 1;
      double c = (a * gb - b * ga) / (gb - ga);
      if (!(c > std::min(a, b) && c < std::max(a, b))) c = 0.5 * (a + b);
      const double gc = problem.gap(c);
      if (gc == 0.0) {
        a = b = c;
        break;
      }
      if ((gc < 0.0) == (gb < 0.0)) {
        b = c;
        gb = gc;
        if (side == -1) ga *= 0.5;
        side = -1;
      } else {
        a = c;
        ga = gc;
        if (side == 1) gb *= 0.5;
        side = 1;
      }
    }
    root = std::abs(ga) < std::abs(gb) ? a : b;
  }
  r.alpha_crit = root;

  std::vector<double> lambdas;
  std::vector<double> lengths;
  for (int i = 0; i < options.flatness_grid; ++i) {
    const double l = i == options.flatness_grid - 1
                         ? options.window_hi
                         : options.window_lo + (options.window_hi - options.window_lo) * i / (options.flatness_grid - 1);
    const auto gs = problem.solve(root, l);
    if (i == 0) {
      const auto& sol = gs.solution(options.axial_edge);
      r.axial_index = gs.index(options.axial_edge);
      r.axial_imbalance = std::abs(std::abs(sol.a) - std::abs(sol.b)) / std::max(std::abs(sol.a), std::abs(sol.b));
      r.lambda0 = gs.lambda0;
    }
    lengths.push_back(l);
    lambdas.push_back(gs.lambda0);
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    r.flatness = std::max(r.flatness, std::abs(lambdas[i] - lambdas[0]));
    if (i > 0) {
      r.max_slope = std::max(r.max_slope, std::abs(lambdas[i] - lambdas[i - 1]) / (lengths[i] - lengths[i - 1]));
    }
  }
  return r;
}

}  // namespace qgraph
