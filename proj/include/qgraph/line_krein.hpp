#pragma once

// Attractive point interactions on a line or a loop, solved through the
// Krein Gamma matrix
//
//   Gamma_ij(kappa) = -delta_ij / alpha_i - G_kappa(y_i, y_j).
//
// Its lowest eigenvalue mu0(kappa) increases strictly with kappa; the ground
// state is the largest kappa with mu0 = 0, and the Perron vector of Gamma there
// gives the (positive) weights of psi = sum_j w_j G_kappa(., y_j).

#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"

namespace qgraph {

struct LineConfig {
  std::vector<double> sites;      ///< strictly increasing
  std::vector<double> strengths;  ///< all negative
};

struct LoopConfig {
  double circumference = 0.0;
  std::vector<double> sites;      ///< sorted, in [0, circumference)
  std::vector<double> strengths;  ///< all negative
};

/// Throw std::invalid_argument on an invalid configuration.
void validate(const LineConfig& config);
void validate(const LoopConfig& config);

struct GammaMatrix {
  double kappa = 0.0;
  Eigen::MatrixXd entries;
};

GammaMatrix gamma_line(const LineConfig& config, double kappa);

/// Uses the periodic resolvent kernel
///   G(d) = cosh(kappa (l/2 - d)) / (2 kappa sinh(kappa l / 2)),
/// with d the arc distance (at most l/2).
GammaMatrix gamma_loop(const LoopConfig& config, double kappa);

double loop_kernel(double kappa, double circumference, double arc_distance);

struct LowestMode {
  double mu0 = 0.0;
  Eigen::VectorXd vector;  ///< unit norm, sign chosen so the entries sum to a positive value
};

LowestMode lowest_mode(const GammaMatrix& gamma);
double mu0(const GammaMatrix& gamma);

struct LineGroundState {
  double kappa0 = 0.0;
  double lambda0 = 0.0;
  Eigen::VectorXd weights;  ///< positive Perron vector of Gamma(kappa0)
  double kappa_max = 0.0;
  int evaluations = 0;
  /// Per gap i: signs of psi'(y_i+) and psi'(y_{i+1}-) (line only; diagnostics).
  std::vector<std::pair<int, int>> gap_derivative_signs;
};

struct KreinOptions {
  int scan_cells = 64;      ///< cells of the downward scan over (0, kappa_max]
  int max_doublings = 60;
};

LineGroundState ground_state_line(const LineConfig& config, const KreinOptions& options = {});
LineGroundState ground_state_loop(const LoopConfig& config, const KreinOptions& options = {});

class MonotonicityViolation : public std::runtime_error {
 public:
  MonotonicityViolation(double before, double after);
  double lambda_before() const noexcept { return before_; }
  double lambda_after() const noexcept { return after_; }

 private:
  double before_, after_;
};

struct MonotonicityReport {
  double lambda_before = 0.0;
  double lambda_after = 0.0;
  double margin = 0.0;  ///< lambda_after - lambda_before
};

/// `stretched` must keep the strengths, change no pairwise distance downward
/// and increase at least one (std::invalid_argument otherwise). Throws
/// MonotonicityViolation if the ground-state energy does not strictly increase.
MonotonicityReport check_monotonicity_line(const LineConfig& config, const LineConfig& stretched);

/// Loop expansion: every neighbour gap (including the wrap-around one) is kept
/// or increased, at least one strictly.
MonotonicityReport check_monotonicity_loop(const LoopConfig& config, const LoopConfig& expanded);

/// n vertices carrying the strengths, n-1 finite edges of the site gaps and a
/// lead at each end vertex (both leads on the single vertex when n = 1).
MetricGraph as_chain_graph(const LineConfig& config);

/// The loop as a cycle graph; a single site gets an auxiliary alpha = 0 vertex
/// at the antipode since self-loops are not allowed.
MetricGraph as_cycle_graph(const LoopConfig& config);

}  // namespace qgraph
