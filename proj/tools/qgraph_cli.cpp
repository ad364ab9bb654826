// qgraph: ground states of delta-coupled metric graphs from the command line.
//
// Exit codes: 0 ok, 2 input error, 3 numerical failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qgraph/experiments.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/ground_state.hpp"
#include "qgraph/line_krein.hpp"
#include "qgraph/oracle.hpp"
#include "report.hpp"

namespace {

using namespace qgraph;

constexpr int kInputError = 2;
constexpr int kNumericalError = 3;

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw InputError(fmt::format("{}: '{}' is not a number", what, text));
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t pos; (pos = s.find(sep, start)) != std::string::npos; start = pos + 1) out.push_back(s.substr(start, pos - start));
  out.push_back(s.substr(start));
  return out;
}

// KIND:ID=LO:HI:STEPS, KIND one of length, alpha.
SweepAxis parse_target(const std::string& text) {
  const auto eq = text.find('=');
  const auto colon = text.find(':');
  if (eq == std::string::npos || colon == std::string::npos || colon > eq) {
    throw InputError(fmt::format("--target '{}': expected KIND:ID=LO:HI:STEPS", text));
  }
  SweepAxis axis;
  const auto kind = text.substr(0, colon);
  if (kind == "length") {
    axis.target = SweepTarget::EdgeLength;
  } else if (kind == "alpha") {
    axis.target = SweepTarget::VertexAlpha;
  } else {
    throw InputError(fmt::format("--target '{}': kind must be 'length' or 'alpha'", text));
  }
  axis.id = text.substr(colon + 1, eq - colon - 1);
  const auto range = split(text.substr(eq + 1), ':');
  if (range.size() != 3) throw InputError(fmt::format("--target '{}': expected LO:HI:STEPS", text));
  axis.lo = parse_number(range[0], "--target");
  axis.hi = parse_number(range[1], "--target");
  const double steps = parse_number(range[2], "--target");
  if (steps != std::floor(steps) || steps > 1e7) throw InputError(fmt::format("--target '{}': STEPS must be an integer", text));
  axis.steps = static_cast<int>(steps);
  return axis;
}

std::pair<double, double> parse_range(const std::string& text, const std::string& flag) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw InputError(fmt::format("{} '{}': expected LO:HI", flag, text));
  return {parse_number(parts[0], flag), parse_number(parts[1], flag)};
}

struct SolverFlags {
  double tol_kappa = 1e-12;
  std::optional<double> kappa_max;

  void add(CLI::App* app) {
    app->add_option("--tol-kappa", tol_kappa, "bisection tolerance in kappa")->check(CLI::PositiveNumber);
    app->add_option("--kappa-max", kappa_max, "upper end of the kappa scan")->check(CLI::PositiveNumber);
  }
  SolverOptions options() const {
    SolverOptions o;
    o.tol_kappa = tol_kappa;
    o.kappa_max = kappa_max;
    return o;
  }
};

void emit_json(const nlohmann::ordered_json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of delta-coupled quantum graphs"};
  app.require_subcommand(1);

  bool json = false;

  // groundstate
  auto* gs_cmd = app.add_subcommand("groundstate", "solve one graph");
  std::string gs_file;
  SolverFlags gs_solver;
  gs_cmd->add_option("graph", gs_file, "graph JSON file")->required();
  gs_cmd->add_flag("--json", json, "JSON output");
  gs_solver.add(gs_cmd);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep to CSV");
  std::string sweep_file, csv_path;
  std::vector<std::string> targets;
  int jobs = 1;
  SolverFlags sweep_solver;
  sweep_cmd->add_option("graph", sweep_file, "graph JSON file")->required();
  sweep_cmd->add_option("--target", targets, "KIND:ID=LO:HI:STEPS with KIND length|alpha; give twice for a grid")
      ->required()
      ->expected(1)
      ->take_all();
  sweep_cmd->add_option("--csv", csv_path, "output file (stdout when omitted)");
  sweep_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  sweep_solver.add(sweep_cmd);

  // crit
  auto* crit_cmd = app.add_subcommand("crit", "critical center coupling of a star graph");
  std::string crit_file, axial_edge, center, window = "0.5:3", alpha_range = "-5:-0.01";
  SolverFlags crit_solver;
  crit_solver.tol_kappa = 1e-14;
  crit_cmd->add_option("graph", crit_file, "graph JSON file")->required();
  crit_cmd->add_option("--axial-edge", axial_edge, "edge whose length is varied")->required();
  crit_cmd->add_option("--center", center, "vertex whose coupling is solved for");
  crit_cmd->add_option("--window", window, "axial length window LO:HI");
  crit_cmd->add_option("--alpha-range", alpha_range, "coupling bracket LO:HI");
  crit_cmd->add_flag("--json", json, "JSON output");
  crit_solver.add(crit_cmd);

  // line
  auto* line_cmd = app.add_subcommand("line", "point interactions on a line or a loop");
  std::vector<double> sites, alphas;
  std::optional<double> loop;
  bool cross_check = false;
  SolverFlags line_solver;
  line_cmd->add_option("--sites", sites, "interaction positions")->required();
  line_cmd->add_option("--alphas", alphas, "coupling strengths")->required();
  line_cmd->add_option("--loop", loop, "loop circumference")->check(CLI::PositiveNumber);
  line_cmd->add_flag("--cross-check", cross_check, "also solve the equivalent graph");
  line_cmd->add_flag("--json", json, "JSON output");
  line_solver.add(line_cmd);

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "secular solver against finite elements");
  std::string cmp_file;
  OracleParams oracle;
  SolverFlags cmp_solver;
  cmp_cmd->set_help_flag("--help", "print this help message and exit");
  cmp_cmd->add_option("graph", cmp_file, "graph JSON file")->required();
  cmp_cmd->add_option("--h", oracle.h, "mesh size")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--R", oracle.truncation, "lead truncation length")->check(CLI::PositiveNumber);
  cmp_cmd->add_flag("--json", json, "JSON output");
  cmp_solver.add(cmp_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (gs_cmd->parsed()) {
      const auto graph = load_graph(gs_file);
      const auto gs = find_ground_state(graph, gs_solver.options());
      if (json) {
        emit_json(cli::to_json(gs));
      } else {
        cli::print_ground_state(std::cout, gs);
      }
    } else if (sweep_cmd->parsed()) {
      const auto graph = load_graph(sweep_file);
      SweepSpec spec;
      for (const auto& t : targets) spec.axes.push_back(parse_target(t));
      spec.jobs = jobs;
      spec.solver = sweep_solver.options();
      validate(graph, spec);
      const auto result = run_sweep(graph, spec);
      if (csv_path.empty()) {
        write_sweep_csv(std::cout, result);
      } else {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw InputError(fmt::format("cannot write '{}'", csv_path));
        write_sweep_csv(out, result);
      }
      std::size_t failed = 0;
      for (const auto& p : result.points) failed += p.ok() ? 0 : 1;
      if (failed) fmt::print(std::cerr, "{} of {} sweep points failed\n", failed, result.points.size());
    } else if (crit_cmd->parsed()) {
      const auto graph = load_graph(crit_file);
      CritOptions opts;
      opts.axial_edge = axial_edge;
      opts.center = center;
      std::tie(opts.window_lo, opts.window_hi) = parse_range(window, "--window");
      std::tie(opts.alpha_lo, opts.alpha_hi) = parse_range(alpha_range, "--alpha-range");
      opts.solver = crit_solver.options();
      const auto r = find_critical_coupling(graph, opts);
      if (json) {
        emit_json(cli::to_json(r));
      } else {
        cli::print_crit(std::cout, r);
      }
    } else if (line_cmd->parsed()) {
      nlohmann::ordered_json report;
      LineGroundState krein;
      MetricGraph graph;
      if (loop) {
        const LoopConfig config{*loop, sites, alphas};
        krein = ground_state_loop(config);
        if (cross_check) graph = as_cycle_graph(config);
      } else {
        const LineConfig config{sites, alphas};
        krein = ground_state_line(config);
        if (cross_check) graph = as_chain_graph(config);
      }
      report["krein"] = cli::to_json(krein);
      if (cross_check) {
        const auto gs = find_ground_state(graph, line_solver.options());
        report["graph"] = {{"lambda0", gs.lambda0}, {"kappa0", gs.kappa0}};
        report["difference"] = gs.lambda0 - krein.lambda0;
      }
      if (json) {
        emit_json(report);
      } else {
        fmt::print("lambda0  {:.17g}\nkappa0   {:.17g}\n", krein.lambda0, krein.kappa0);
        if (cross_check) {
          fmt::print("graph    {:.17g}\ndiff     {:.3e}\n", report["graph"]["lambda0"].get<double>(),
                     report["difference"].get<double>());
        }
      }
    } else if (cmp_cmd->parsed()) {
      const auto graph = load_graph(cmp_file);
      const auto gs = find_ground_state(graph, cmp_solver.options());
      const auto r = compare(graph, gs, oracle);
      if (json) {
        emit_json(cli::to_json(r));
      } else {
        cli::print_comparison(std::cout, r);
      }
    }
  } catch (const GraphParseError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kInputError;
  } catch (const SolverError& e) {
    fmt::print(std::cerr, "numerical failure ({}): {}\n", to_string(e.kind()), e.what());
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    // InvalidGraph, bad sweep specs and malformed line configs all land here.
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "numerical failure: {}\n", e.what());
    return kNumericalError;
  }
  return 0;
}
