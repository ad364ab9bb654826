#include "qgraph/ground_state.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace qgraph {

const char* to_string(SolverErrorKind kind) {
  switch (kind) {
    case SolverErrorKind::NoBoundState: return "NoBoundState";
    case SolverErrorKind::DegenerateRoot: return "DegenerateRoot";
    case SolverErrorKind::PositivityViolation: return "PositivityViolation";
    case SolverErrorKind::NoRoot: return "NoRoot";
    case SolverErrorKind::FactorizationFailure: return "FactorizationFailure";
  }
  return "SolverError";
}

SolverError::SolverError(SolverErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

// ---------------------------------------------------------------------------
// EdgeSolution

double EdgeSolution::value(double x) const {
  if (kind == EdgeKind::Infinite) return c * std::exp(-kappa * x);
  return p * std::exp(-kappa * x) + q * std::exp(-kappa * (length - x));
}

double EdgeSolution::derivative(double x) const {
  if (kind == EdgeKind::Infinite) return -kappa * c * std::exp(-kappa * x);
  return kappa * (q * std::exp(-kappa * (length - x)) - p * std::exp(-kappa * x));
}

namespace {

struct Moments {
  double decaying;  // integral of exp(-2 kappa x)
  double growing;   // integral of exp(-2 kappa (l - x))
  double cross;     // integral of exp(-kappa l)
};

Moments moments(double kappa, double length, double x0, double x1) {
  const double width = x1 - x0;
  const double shape = -std::expm1(-2.0 * kappa * width) / (2.0 * kappa);
  Moments m{};
  m.decaying = std::exp(-2.0 * kappa * x0) * shape;
  if (std::isfinite(length)) {
    m.growing = std::exp(-2.0 * kappa * (length - x1)) * shape;
    m.cross = std::exp(-kappa * length) * width;
  }
  return m;
}

}  // namespace

double EdgeSolution::norm_squared(double x0, double x1) const {
  const Moments m = moments(kappa, length, x0, x1);
  if (kind == EdgeKind::Infinite) return c * c * m.decaying;
  return p * p * m.decaying + q * q * m.growing + 2.0 * p * q * m.cross;
}

double EdgeSolution::dirichlet(double x0, double x1) const {
  const Moments m = moments(kappa, length, x0, x1);
  const double k2 = kappa * kappa;
  if (kind == EdgeKind::Infinite) return k2 * c * c * m.decaying;
  return k2 * (p * p * m.decaying + q * q * m.growing - 2.0 * p * q * m.cross);
}

double EdgeSolution::norm_squared() const { return norm_squared(0.0, length); }
double EdgeSolution::dirichlet() const { return dirichlet(0.0, length); }

// ---------------------------------------------------------------------------
// Edge index

EdgeIndex classify_edge_index(double a, double b, double eps) {
  const double abs_a = std::abs(a), abs_b = std::abs(b);
  const double scale = std::max(abs_a, abs_b);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("edge index needs finite coefficients, not both zero");
  }
  const double gap = abs_a - abs_b;
  if (std::abs(gap) <= eps * scale) return EdgeIndex::Exponential;
  return gap > 0.0 ? EdgeIndex::Cosh : EdgeIndex::Sinh;
}

EdgeIndex classify_edge_index(const EdgeSolution& sol, double eps) {
  if (sol.kind == EdgeKind::Infinite) return EdgeIndex::Exponential;
  return classify_edge_index(sol.a, sol.b, eps);
}

// ---------------------------------------------------------------------------
// GroundState accessors

const EdgeSolution& GroundState::solution(std::string_view edge_id) const {
  for (const auto& s : solutions) {
    if (s.edge_id == edge_id) return s;
  }
  throw std::out_of_range("no solution for edge '" + std::string(edge_id) + "'");
}

EdgeIndex GroundState::index(std::string_view edge_id) const {
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    if (solutions[i].edge_id == edge_id) return indices[i];
  }
  throw std::out_of_range("no index for edge '" + std::string(edge_id) + "'");
}

std::vector<int> GroundState::index_vector() const {
  std::vector<int> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(sign_of(i));
  return out;
}

// ---------------------------------------------------------------------------
// Solver

namespace {

bool sign_change(double lower, double upper) {
  return lower == 0.0 || upper == 0.0 || ((lower < 0.0) != (upper < 0.0));
}

struct Bracket {
  double lo, hi;
  double f_lo, f_hi;
  bool first_cell;
};

class Scanner {
 public:
  Scanner(const SecularSystem& system, const SolverOptions& options, Diagnostics& diag)
      : system_(system), options_(options), diag_(diag) {}

  std::optional<Bracket> run(double kappa_max, double step) {
    double hi = kappa_max;
    double f_hi = eval(hi);
    double abs_above = std::numeric_limits<double>::infinity();

    for (long i = 1;; ++i) {
      const double lo = kappa_max - static_cast<double>(i) * step;
      if (lo < 0.5 * step) break;
      const double f_lo = eval(lo);
      if (sign_change(f_lo, f_hi)) return Bracket{lo, hi, f_lo, f_hi, i == 1};

      // |indicator| has a local minimum at hi without a sign change: two roots
      // may hide inside one cell, so look again on finer grids.
      if (std::abs(f_hi) < abs_above && std::abs(f_hi) < std::abs(f_lo)) {
        if (auto b = refine(hi, step, i > 1, f_hi)) return b;
        diag_.flagged_cells.push_back(hi);
      }
      abs_above = std::abs(f_hi);
      hi = lo;
      f_hi = f_lo;
    }

    // Near kappa = 0 the two exponentials of a finite edge coincide; approach it geometrically.
    while (hi > 1e-10 * kappa_max) {
      const double lo = 0.5 * hi;
      const double f_lo = eval(lo);
      if (sign_change(f_lo, f_hi)) return Bracket{lo, hi, f_lo, f_hi, false};
      hi = lo;
      f_hi = f_lo;
    }
    return std::nullopt;
  }

  double eval(double kappa) {
    ++diag_.indicator_evaluations;
    return system_.indicator(kappa);
  }

 private:
  std::optional<Bracket> refine(double center, double step, bool include_upper, double f_center) {
    for (int level = 1; level <= options_.dip_refinements; ++level) {
      const int parts = 1 << level;
      const double sub = step / parts;
      // Upper cell first so the largest root wins.
      double top = include_upper ? center + step : center;
      double f_top = include_upper ? eval(top) : f_center;
      const int total = include_upper ? 2 * parts : parts;
      for (int k = 1; k <= total; ++k) {
        const double x = top - sub;
        const double fx = (include_upper && k == parts) ? f_center : eval(x);
        if (sign_change(fx, f_top)) return Bracket{x, top, fx, f_top, false};
        top = x;
        f_top = fx;
      }
    }
    return std::nullopt;
  }

  const SecularSystem& system_;
  const SolverOptions& options_;
  Diagnostics& diag_;
};

Eigen::MatrixXd equilibrated(const SecularSystem& system, double kappa) {
  Eigen::MatrixXd m;
  system.fill(kappa, m);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double scale = m.row(r).cwiseAbs().maxCoeff();
    if (scale > 0.0) m.row(r) /= scale;
  }
  return m;
}

std::vector<EdgeSolution> reconstruct(const SecularSystem& system, double kappa,
                                      const SolverOptions& options, Diagnostics& diag) {
  const MetricGraph& graph = system.graph();
  const Eigen::MatrixXd m = equilibrated(system, kappa);
  const Eigen::Index n = m.rows();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  diag.sigma_min = sv(n - 1);
  diag.sigma_next = n > 1 ? sv(n - 2) : std::numeric_limits<double>::infinity();
  diag.nullspace_gap = diag.sigma_min > 0.0 ? diag.sigma_next / diag.sigma_min
                                            : std::numeric_limits<double>::infinity();
  if (n > 1 && diag.sigma_next <= 1e-8 * sv(0)) {
    throw SolverError(SolverErrorKind::DegenerateRoot,
                      "null space of M(kappa) has dimension > 1 at kappa = " + std::to_string(kappa));
  }
  const Eigen::VectorXd x = svd.matrixV().col(n - 1);

  std::vector<EdgeSolution> out;
  out.reserve(graph.num_edges());
  for (std::size_t e = 0; e < graph.finite_edges.size(); ++e) {
    EdgeSolution s;
    s.edge_id = graph.finite_edges[e].id;
    s.kind = EdgeKind::Finite;
    s.kappa = kappa;
    s.length = graph.finite_edges[e].length;
    const auto col = static_cast<Eigen::Index>(system.column_of({e, true, true}));
    s.p = x(col);
    s.q = x(col + 1);
    out.push_back(std::move(s));
  }
  for (std::size_t e = 0; e < graph.infinite_edges.size(); ++e) {
    EdgeSolution s;
    s.edge_id = graph.infinite_edges[e].id;
    s.kind = EdgeKind::Infinite;
    s.kappa = kappa;
    s.c = x(static_cast<Eigen::Index>(system.column_of({e, false, true})));
    out.push_back(std::move(s));
  }

  const std::size_t n_finite = graph.finite_edges.size();
  auto solution_of = [&](const Incidence& inc) -> EdgeSolution& {
    return out[inc.finite ? inc.edge : n_finite + inc.edge];
  };
  auto value_at = [&](const Incidence& inc) {
    const EdgeSolution& s = solution_of(inc);
    return s.value(inc.at_start ? 0.0 : s.length);
  };
  auto outward_derivative = [&](const Incidence& inc) {
    const EdgeSolution& s = solution_of(inc);
    return inc.at_start ? s.derivative(0.0) : -s.derivative(s.length);
  };

  const auto& incs = system.vertex_incidences();
  std::size_t anchor = 0;
  for (std::size_t v = 1; v < graph.vertices.size(); ++v) {
    if (graph.vertices[v].alpha < graph.vertices[anchor].alpha) anchor = v;
  }
  const double anchor_value = value_at(incs[anchor].front());
  if (anchor_value == 0.0) {
    throw SolverError(SolverErrorKind::PositivityViolation,
                      "eigenfunction vanishes at the most attractive vertex");
  }

  double norm2 = 0.0;
  for (const auto& s : out) norm2 += s.norm_squared();
  const double scale = std::copysign(1.0 / std::sqrt(norm2), anchor_value);
  for (auto& s : out) {
    s.p *= scale;
    s.q *= scale;
    s.c *= scale;
    if (s.kind == EdgeKind::Finite) {
      const double decay = std::exp(-kappa * s.length);
      s.a = s.p + s.q * decay;
      s.b = s.q * decay - s.p;
    }
  }

  // Positivity on a uniform sample of every finite edge, sign of c on leads.
  // Parts of psi that sit below the rounding level of the null vector (e.g.
  // exp(-kappa l) across a very long edge) carry an arbitrary sign, so
  // values within that floor of zero are accepted.
  double min_sample = std::numeric_limits<double>::infinity(), max_sample = 0.0;
  const int samples = std::max(2, options.positivity_samples);
  for (const auto& s : out) {
    if (s.kind == EdgeKind::Infinite) {
      min_sample = std::min(min_sample, s.c);
      max_sample = std::max(max_sample, s.c);
      continue;
    }
    for (int k = 0; k < samples; ++k) {
      const double v = s.value(s.length * k / (samples - 1));
      min_sample = std::min(min_sample, v);
      max_sample = std::max(max_sample, v);
    }
  }
  diag.min_sample = min_sample;
  const double noise_floor = 1e3 * std::numeric_limits<double>::epsilon() * max_sample;
  if (!(min_sample > -noise_floor) || !(max_sample > 0.0)) {
    throw SolverError(SolverErrorKind::PositivityViolation,
                      "eigenfunction at kappa = " + std::to_string(kappa) +
                          " changes sign; the root is not the ground state");
  }

  double vertex_scale = 0.0, alpha_scale = kappa;
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    vertex_scale = std::max(vertex_scale, std::abs(value_at(incs[v].front())));
    alpha_scale = std::max(alpha_scale, std::abs(graph.vertices[v].alpha));
  }
  double cont = 0.0, deriv = 0.0;
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    const double v0 = value_at(incs[v].front());
    double sum = 0.0;
    for (const auto& inc : incs[v]) {
      cont = std::max(cont, std::abs(value_at(inc) - v0));
      sum += outward_derivative(inc);
    }
    deriv = std::max(deriv, std::abs(sum - graph.vertices[v].alpha * v0));
  }
  diag.continuity_residual = cont / vertex_scale;
  diag.derivative_residual = deriv / (vertex_scale * alpha_scale);
  return out;
}

}  // namespace

std::vector<EdgeSolution> reconstruct_eigenfunction(const MetricGraph& graph, double kappa0,
                                                    const SolverOptions& options) {
  if (!(kappa0 > 0.0)) throw std::invalid_argument("kappa0 must be positive");
  SecularSystem system(graph);
  Diagnostics diag;
  return reconstruct(system, kappa0, options, diag);
}

GroundState find_ground_state(const MetricGraph& graph, const SolverOptions& options) {
  SecularSystem system(graph);
  Diagnostics diag;

  const bool fixed_max = options.kappa_max.has_value();
  double kappa_max = fixed_max ? *options.kappa_max
                               : std::max({graph.total_attraction(), 1.0,
                                           1.05 * kappa_upper_bound(graph)});
  if (!(kappa_max > 0.0) || !std::isfinite(kappa_max)) {
    throw std::invalid_argument("kappa_max must be positive and finite");
  }

  Scanner scanner(system, options, diag);
  std::optional<Bracket> bracket;
  for (int attempt = 0; attempt < 32; ++attempt) {
    const double step = options.scan_step.value_or(std::min(1e-2, kappa_max / 1e4));
    diag.kappa_max = kappa_max;
    diag.scan_step = step;
    bracket = scanner.run(kappa_max, step);
    if (bracket && bracket->first_cell && !fixed_max) {
      kappa_max *= 2.0;
      ++diag.restarts;
      continue;
    }
    break;
  }
  if (!bracket) {
    throw SolverError(SolverErrorKind::NoBoundState,
                      "no sign change of the secular indicator below kappa_max = " +
                          std::to_string(kappa_max));
  }

  double lo = bracket->lo, hi = bracket->hi, f_hi = bracket->f_hi;
  if (bracket->f_lo == 0.0) hi = lo;
  if (f_hi == 0.0) lo = hi;
  for (int it = 0; it < 400 && hi - lo > options.tol_kappa; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = scanner.eval(mid);
    ++diag.bisection_steps;
    if (f_mid == 0.0) {
      lo = hi = mid;
    } else if ((f_mid < 0.0) == (f_hi < 0.0)) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
    }
  }
  diag.bracket_lo = lo;
  diag.bracket_hi = hi;

  GroundState gs;
  gs.kappa0 = 0.5 * (lo + hi);
  gs.lambda0 = -gs.kappa0 * gs.kappa0;
  gs.solutions = reconstruct(system, gs.kappa0, options, diag);
  gs.indices.reserve(gs.solutions.size());
  for (const auto& s : gs.solutions) gs.indices.push_back(classify_edge_index(s, options.eps_index));
  gs.diagnostics = std::move(diag);
  return gs;
}

}  // namespace qgraph
