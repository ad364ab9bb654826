#include "qgraph/line_krein.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>

#include "qgraph/ground_state.hpp"

namespace qgraph {

namespace {

void check_strengths(const std::vector<double>& sites, const std::vector<double>& strengths) {
  if (sites.empty()) throw std::invalid_argument("configuration needs at least one site");
  if (sites.size() != strengths.size()) {
    throw std::invalid_argument("sites and strengths differ in length");
  }
  for (double a : strengths) {
    if (!(a < 0.0) || !std::isfinite(a)) throw std::invalid_argument("all strengths must be negative");
  }
  for (double y : sites) {
    if (!std::isfinite(y)) throw std::invalid_argument("sites must be finite");
  }
}

template <typename Kernel>
GammaMatrix assemble(const std::vector<double>& strengths, double kappa, Kernel kernel) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be positive");
  const auto n = static_cast<Eigen::Index>(strengths.size());
  GammaMatrix g{kappa, Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double v = -kernel(i, j);
      if (i == j) v -= 1.0 / strengths[static_cast<std::size_t>(i)];
      g.entries(i, j) = g.entries(j, i) = v;
    }
  }
  return g;
}

template <typename Gamma>
LineGroundState solve(double kappa_start, const KreinOptions& options, Gamma gamma) {
  LineGroundState out;
  auto eval = [&](double kappa) {
    ++out.evaluations;
    return mu0(gamma(kappa));
  };

  // mu0 > 0 above the ground state; grow the bracket until that holds at the top.
  double kappa_max = kappa_start;
  double f_max = eval(kappa_max);
  for (int k = 0; f_max <= 0.0; ++k) {
    if (k == options.max_doublings) {
      throw SolverError(SolverErrorKind::NoRoot, "mu0 stays nonpositive up to kappa = " +
                                                     std::to_string(kappa_max));
    }
    kappa_max *= 2.0;
    f_max = eval(kappa_max);
  }
  out.kappa_max = kappa_max;

  const double step = kappa_max / std::max(1, options.scan_cells);
  double hi = kappa_max, f_hi = f_max;
  double lo = hi - step;
  double f_lo = 0.0;
  for (;;) {
    if (lo <= 0.0) lo = 0.5 * hi;
    f_lo = eval(lo);
    if (f_lo <= 0.0) break;
    hi = lo;
    f_hi = f_lo;
    if (hi < 1e-12 * kappa_max) {
      throw SolverError(SolverErrorKind::NoRoot, "mu0 has no sign change above kappa = 0");
    }
    lo = hi - step;
  }

  if (f_lo == 0.0) {
    out.kappa0 = lo;
  } else {
    std::uintmax_t iterations = 200;
    auto [a, b] = boost::math::tools::toms748_solve(
        eval, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), iterations);
    out.kappa0 = 0.5 * (a + b);
  }
  out.lambda0 = -out.kappa0 * out.kappa0;
  out.weights = lowest_mode(gamma(out.kappa0)).vector;
  return out;
}

}  // namespace

void validate(const LineConfig& config) {
  check_strengths(config.sites, config.strengths);
  for (std::size_t i = 1; i < config.sites.size(); ++i) {
    if (!(config.sites[i] > config.sites[i - 1])) {
      throw std::invalid_argument("line sites must be strictly increasing");
    }
  }
}

void validate(const LoopConfig& config) {
  if (!(config.circumference > 0.0) || !std::isfinite(config.circumference)) {
    throw std::invalid_argument("loop circumference must be positive");
  }
  check_strengths(config.sites, config.strengths);
  for (std::size_t i = 0; i < config.sites.size(); ++i) {
    if (config.sites[i] < 0.0 || config.sites[i] >= config.circumference) {
      throw std::invalid_argument("loop sites must lie in [0, circumference)");
    }
    if (i > 0 && !(config.sites[i] > config.sites[i - 1])) {
      throw std::invalid_argument("loop sites must be sorted and distinct");
    }
  }
}

GammaMatrix gamma_line(const LineConfig& config, double kappa) {
  validate(config);
  const auto& y = config.sites;
  return assemble(config.strengths, kappa, [&](Eigen::Index i, Eigen::Index j) {
    const double d = std::abs(y[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)]);
    return std::exp(-kappa * d) / (2.0 * kappa);
  });
}

double loop_kernel(double kappa, double circumference, double arc_distance) {
  // cosh(k (l/2 - d)) / (2k sinh(k l/2)) rewritten without overflow.
  const double num = std::exp(-kappa * arc_distance) + std::exp(-kappa * (circumference - arc_distance));
  return num / (2.0 * kappa * -std::expm1(-kappa * circumference));
}

GammaMatrix gamma_loop(const LoopConfig& config, double kappa) {
  validate(config);
  const auto& y = config.sites;
  const double l = config.circumference;
  return assemble(config.strengths, kappa, [&](Eigen::Index i, Eigen::Index j) {
    const double chord = std::abs(y[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)]);
    return loop_kernel(kappa, l, std::min(chord, l - chord));
  });
}

LowestMode lowest_mode(const GammaMatrix& gamma) {
  LowestMode mode;
  if (gamma.entries.rows() == 1) {
    mode.mu0 = gamma.entries(0, 0);
    mode.vector = Eigen::VectorXd::Ones(1);
    return mode;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma.entries);
  mode.mu0 = eig.eigenvalues()(0);
  mode.vector = eig.eigenvectors().col(0);
  if (mode.vector.sum() < 0.0) mode.vector = -mode.vector;
  return mode;
}

double mu0(const GammaMatrix& gamma) {
  if (gamma.entries.rows() == 1) return gamma.entries(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma.entries, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

LineGroundState ground_state_line(const LineConfig& config, const KreinOptions& options) {
  validate(config);
  double total = 0.0;
  for (double a : config.strengths) total += -a;
  auto out = solve(0.505 * total, options, [&](double k) { return gamma_line(config, k); });

  const auto& y = config.sites;
  const double kappa = out.kappa0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    double right_of_left = 0.0, left_of_right = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double w = out.weights(static_cast<Eigen::Index>(j));
      const double s = j <= i ? -1.0 : 1.0;
      right_of_left += s * w * std::exp(-kappa * std::abs(y[i] - y[j]));
      left_of_right += s * w * std::exp(-kappa * std::abs(y[i + 1] - y[j]));
    }
    auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
    out.gap_derivative_signs.emplace_back(sgn(right_of_left), sgn(left_of_right));
  }
  return out;
}

LineGroundState ground_state_loop(const LoopConfig& config, const KreinOptions& options) {
  validate(config);
  double total = 0.0;
  for (double a : config.strengths) total += -a;
  return solve(0.505 * total, options, [&](double k) { return gamma_loop(config, k); });
}

MonotonicityViolation::MonotonicityViolation(double before, double after)
    : std::runtime_error("ground-state energy did not increase: before " + std::to_string(before) +
                         ", after " + std::to_string(after)),
      before_(before),
      after_(after) {}

namespace {

void compare_distances(const std::vector<double>& before, const std::vector<double>& after) {
  if (before.size() != after.size()) throw std::invalid_argument("configurations differ in size");
  bool increased = false;
  for (std::size_t k = 0; k < before.size(); ++k) {
    const double slack = 1e-12 * std::max(1.0, std::abs(before[k]));
    if (after[k] < before[k] - slack) throw std::invalid_argument("stretch decreases a distance");
    if (after[k] > before[k] + slack) increased = true;
  }
  if (!increased) throw std::invalid_argument("stretch increases no distance");
}

MonotonicityReport finish(double before, double after) {
  if (!(after > before)) throw MonotonicityViolation(before, after);
  return {before, after, after - before};
}

}  // namespace

MonotonicityReport check_monotonicity_line(const LineConfig& config, const LineConfig& stretched) {
  validate(config);
  validate(stretched);
  if (config.strengths != stretched.strengths) throw std::invalid_argument("strengths must match");
  std::vector<double> before, after;
  for (std::size_t i = 0; i < config.sites.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      before.push_back(config.sites[i] - config.sites[j]);
      after.push_back(stretched.sites[i] - stretched.sites[j]);
    }
  }
  compare_distances(before, after);
  return finish(ground_state_line(config).lambda0, ground_state_line(stretched).lambda0);
}

MonotonicityReport check_monotonicity_loop(const LoopConfig& config, const LoopConfig& expanded) {
  validate(config);
  validate(expanded);
  if (config.strengths != expanded.strengths) throw std::invalid_argument("strengths must match");
  auto gaps = [](const LoopConfig& c) {
    std::vector<double> g;
    for (std::size_t i = 0; i + 1 < c.sites.size(); ++i) g.push_back(c.sites[i + 1] - c.sites[i]);
    g.push_back(c.circumference - c.sites.back() + c.sites.front());
    return g;
  };
  compare_distances(gaps(config), gaps(expanded));
  return finish(ground_state_loop(config).lambda0, ground_state_loop(expanded).lambda0);
}

MetricGraph as_chain_graph(const LineConfig& config) {
  validate(config);
  MetricGraph g;
  const std::size_t n = config.sites.size();
  for (std::size_t i = 0; i < n; ++i) g.vertices.push_back({"y" + std::to_string(i), config.strengths[i]});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.finite_edges.push_back({"g" + std::to_string(i), g.vertices[i].id, g.vertices[i + 1].id,
                              config.sites[i + 1] - config.sites[i]});
  }
  g.infinite_edges.push_back({"left", g.vertices.front().id});
  g.infinite_edges.push_back({"right", g.vertices.back().id});
  return g;
}

MetricGraph as_cycle_graph(const LoopConfig& config) {
  validate(config);
  MetricGraph g;
  const std::size_t n = config.sites.size();
  for (std::size_t i = 0; i < n; ++i) g.vertices.push_back({"y" + std::to_string(i), config.strengths[i]});
  if (n == 1) {
    g.vertices.push_back({"aux", 0.0});
    const double half = 0.5 * config.circumference;
    g.finite_edges.push_back({"a0", "y0", "aux", half});
    g.finite_edges.push_back({"a1", "aux", "y0", half});
    return g;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    g.finite_edges.push_back({"g" + std::to_string(i), g.vertices[i].id, g.vertices[i + 1].id,
                              config.sites[i + 1] - config.sites[i]});
  }
  g.finite_edges.push_back({"g" + std::to_string(n - 1), g.vertices.back().id, g.vertices.front().id,
                            config.circumference - config.sites.back() + config.sites.front()});
  return g;
}

}  // namespace qgraph
