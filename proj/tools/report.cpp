#include "report.hpp"

#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace qgraph::cli {

using nlohmann::ordered_json;

namespace {

const char* kind_name(EdgeKind k) { return k == EdgeKind::Finite ? "finite" : "lead"; }

}  // namespace

ordered_json to_json(const GroundState& gs) {
  ordered_json edges = ordered_json::array();
  for (std::size_t i = 0; i < gs.solutions.size(); ++i) {
    const auto& s = gs.solutions[i];
    ordered_json e{{"id", s.edge_id}, {"kind", kind_name(s.kind)}};
    if (s.kind == EdgeKind::Finite) {
      e["length"] = s.length;
      e["a"] = s.a;
      e["b"] = s.b;
    } else {
      e["c"] = s.c;
    }
    e["index"] = sign_of(gs.indices[i]);
    edges.push_back(std::move(e));
  }
  const auto& d = gs.diagnostics;
  return {
      {"lambda0", gs.lambda0},
      {"kappa0", gs.kappa0},
      {"edges", edges},
      {"diagnostics",
       {{"kappa_max", d.kappa_max},
        {"scan_step", d.scan_step},
        {"restarts", d.restarts},
        {"indicator_evaluations", d.indicator_evaluations},
        {"bisection_steps", d.bisection_steps},
        {"bracket", {d.bracket_lo, d.bracket_hi}},
        {"flagged_cells", d.flagged_cells},
        {"continuity_residual", d.continuity_residual},
        {"derivative_residual", d.derivative_residual},
        {"sigma_min", d.sigma_min},
        {"sigma_next", d.sigma_next},
        {"nullspace_gap", d.nullspace_gap},
        {"min_sample", d.min_sample}}},
  };
}

ordered_json to_json(const CritResult& r) {
  return {
      {"alpha_crit", r.alpha_crit},
      {"center", r.center},
      {"lambda0", r.lambda0},
      {"flatness", r.flatness},
      {"max_slope", r.max_slope},
      {"axial_index", sign_of(r.axial_index)},
      {"axial_imbalance", r.axial_imbalance},
      {"iterations", r.iterations},
  };
}

ordered_json to_json(const ComparisonReport& r) {
  return {
      {"lambda_secular", r.lambda_secular},
      {"lambda_oracle", r.lambda_oracle},
      {"difference", r.difference},
      {"tolerance", r.tolerance},
      {"h", r.h},
      {"R", r.truncation},
      {"variational", r.variational},
      {"verdict", r.passed ? "pass" : "fail"},
  };
}

ordered_json to_json(const LineGroundState& gs) {
  std::vector<double> w(gs.weights.data(), gs.weights.data() + gs.weights.size());
  return {
      {"lambda0", gs.lambda0},
      {"kappa0", gs.kappa0},
      {"weights", w},
      {"kappa_max", gs.kappa_max},
      {"evaluations", gs.evaluations},
  };
}

void print_ground_state(std::ostream& out, const GroundState& gs) {
  fmt::print(out, "lambda0  {:.17g}\nkappa0   {:.17g}\n\n", gs.lambda0, gs.kappa0);
  fmt::print(out, "{:<12} {:<6} {:>24} {:>24} {:>6}\n", "edge", "kind", "a | c", "b", "index");
  for (std::size_t i = 0; i < gs.solutions.size(); ++i) {
    const auto& s = gs.solutions[i];
    if (s.kind == EdgeKind::Finite) {
      fmt::print(out, "{:<12} {:<6} {:>24.17g} {:>24.17g} {:>6}\n", s.edge_id, "finite", s.a, s.b,
                 sign_of(gs.indices[i]));
    } else {
      fmt::print(out, "{:<12} {:<6} {:>24.17g} {:>24} {:>6}\n", s.edge_id, "lead", s.c, "", sign_of(gs.indices[i]));
    }
  }
  const auto& d = gs.diagnostics;
  fmt::print(out, "\ncontinuity residual  {:.3e}\nderivative residual  {:.3e}\n", d.continuity_residual,
             d.derivative_residual);
  fmt::print(out, "nullspace gap        {:.3e}\nmin sampled psi      {:.3e}\n", d.nullspace_gap, d.min_sample);
  fmt::print(out, "indicator evals      {}  (kappa_max {:.6g}, step {:.3g}, restarts {})\n", d.indicator_evaluations,
             d.kappa_max, d.scan_step, d.restarts);
  if (!d.flagged_cells.empty()) fmt::print(out, "flagged cells        {}\n", d.flagged_cells.size());
}

void print_crit(std::ostream& out, const CritResult& r) {
  fmt::print(out, "alpha_crit       {:.17g}  (vertex {})\n", r.alpha_crit, r.center);
  fmt::print(out, "lambda0          {:.17g}\n", r.lambda0);
  fmt::print(out, "flatness         {:.3e}\nmax |dlambda/dL| {:.3e}\n", r.flatness, r.max_slope);
  fmt::print(out, "axial index      {}  (imbalance {:.3e})\niterations       {}\n", sign_of(r.axial_index),
             r.axial_imbalance, r.iterations);
}

void print_comparison(std::ostream& out, const ComparisonReport& r) {
  fmt::print(out, "secular    {:.17g}\noracle     {:.17g}\n", r.lambda_secular, r.lambda_oracle);
  fmt::print(out, "difference {:.3e}\ntolerance  {:.3e}  (h {:.4g}, R {:.4g})\n", r.difference, r.tolerance, r.h,
             r.truncation);
  fmt::print(out, "verdict    {}{}\n", r.passed ? "pass" : "fail",
             r.variational ? "" : "  (oracle below secular value)");
}

}  // namespace qgraph::cli
