#pragma once

// Brute-force check of the secular solver: conforming P1 finite elements for
// the quadratic form on a graph whose leads are cut at length R with a
// Dirichlet end. Vertex continuity comes from shared vertex nodes and the
// coupling enters only the stiffness diagonal at vertex nodes, so the discrete
// eigenvalue is a variational upper bound on the true ground-state energy.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "qgraph/graph.hpp"
#include "qgraph/ground_state.hpp"

namespace qgraph {

struct Discretization {
  double h_target = 0.0;
  double truncation = 0.0;   ///< R; 0 when there are no leads
  double h_max = 0.0;        ///< largest element actually used
  double kappa_bound = 0.0;  ///< kappa_upper_bound of the graph, used for the default shift
  bool has_leads = false;
  std::size_t num_nodes = 0;
  std::vector<std::int32_t> vertex_nodes;
  std::vector<std::vector<std::int32_t>> finite_nodes;  ///< from-vertex node .. to-vertex node
  std::vector<std::vector<std::int32_t>> lead_nodes;    ///< anchor node first, Dirichlet end dropped
  Eigen::SparseMatrix<double> stiffness;
  Eigen::SparseMatrix<double> mass;
};

/// Each edge gets round(length / h) elements (at least one), so edge lengths
/// are exact. Throws InvalidGraph, or std::invalid_argument for h <= 0 or
/// R <= 0 with leads present.
Discretization discretize(const MetricGraph& graph, double h, double truncation);

/// -u'' on (0, length) with Dirichlet ends; numerics sanity case outside the
/// graph setting (smallest eigenvalue (pi / length)^2).
Discretization discretize_dirichlet_interval(double length, double h);

struct OracleResult {
  double lambda_min = 0.0;
  double h = 0.0;             ///< h_max of the mesh
  double truncation = 0.0;
  double error_bound = 0.0;   ///< C_cmp kappa^4 h^2 + truncation term
  double shift = 0.0;
  int iterations = 0;
};

/// Smallest generalized eigenvalue of (K, M) by shift-and-invert iteration
/// from the all-ones vector. The shift defaults to a rigorous lower bound on
/// the spectrum; it is lowered further whenever K - shift M fails to be
/// positive definite. Throws SolverError(FactorizationFailure).
OracleResult smallest_eigenvalue(const Discretization& disc, std::optional<double> shift = std::nullopt);

struct OracleParams {
  double h = 0.01;
  std::optional<double> truncation;  ///< default max(15, 25 / kappa0)
};

struct ComparisonReport {
  double lambda_secular = 0.0;
  double lambda_oracle = 0.0;
  double difference = 0.0;  ///< oracle - secular
  double tolerance = 0.0;
  double h = 0.0;
  double truncation = 0.0;
  bool passed = false;
  bool variational = false;  ///< oracle >= secular - 1e-10
};

double default_truncation(double kappa0);

/// tol_cmp = C_cmp kappa0^4 h^2 + 4 kappa0^2 exp(-2 kappa0 R) (second term only with leads).
double comparison_tolerance(double kappa0, double h, double truncation, bool has_leads);

/// C_cmp: twice the measured P1 error constant of one alpha = -2 vertex on the line.
double calibration_constant();

ComparisonReport compare(const MetricGraph& graph, const GroundState& secular, const OracleParams& params = {});

}  // namespace qgraph
