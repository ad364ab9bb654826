#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "qgraph/trial.hpp"
#include "support/random_graphs.hpp"

using namespace qgraph;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

MetricGraph star() {
  return {{{"c", -1.0}, {"a", -1.5}, {"b", -1.5}, {"t", -2.0}},
          {{"ea", "c", "a", 1.0}, {"eb", "c", "b", 1.0}, {"et", "c", "t", 1.4}},
          {}};
}

}  // namespace

TEST(QuadraticForm, ConstantOnCompactGraph) {
  const auto g = star();
  const auto q = quadratic_form(g, TrialFunction::constant(g, 2.0, 0.0));
  EXPECT_NEAR(q.dirichlet, 0.0, 1e-15);
  EXPECT_NEAR(q.vertex, 4.0 * -6.0, 1e-14);
  EXPECT_NEAR(q.norm_squared, 4.0 * 3.4, 1e-13);
  EXPECT_NEAR(rayleigh_quotient(g, TrialFunction::constant(g, 1.0, 0.0)), -6.0 / 3.4, 1e-14);
}

TEST(QuadraticForm, ExponentialTail) {
  // psi = exp(-k x) on one lead: q = k/2 + alpha, norm = 1 / (2k).
  MetricGraph g{{{"v", -2.0}}, {}, {{"l", "v"}}};
  const double k = 0.7;
  const auto q = quadratic_form(g, TrialFunction::constant(g, 1.0, k));
  EXPECT_NEAR(q.dirichlet, 0.5 * k, 1e-15);
  EXPECT_NEAR(q.vertex, -2.0, 1e-15);
  EXPECT_NEAR(q.norm_squared, 0.5 / k, 1e-15);
}

TEST(QuadraticForm, RejectsBadTrials) {
  MetricGraph g{{{"v", -2.0}}, {}, {{"l", "v"}}};
  EXPECT_THROW(quadratic_form(g, TrialFunction::constant(g, 1.0, 0.0)), std::invalid_argument);  // not L2

  MetricGraph two{{{"a", -1.0}, {"b", -1.0}}, {{"e", "a", "b", 1.0}}, {}};
  TrialFunction gap;
  gap.finite.push_back({{TrialPiece{0.0, 0.4, {{1.0, 0.0, 0.0}}}, TrialPiece{0.5, 1.0, {{1.0, 0.0, 0.0}}}}});
  EXPECT_THROW(quadratic_form(two, gap), std::invalid_argument);

  TrialFunction jump;
  jump.finite.push_back({{TrialPiece{0.0, 0.5, {{1.0, 0.0, 0.0}}}, TrialPiece{0.5, 1.0, {{2.0, 0.0, 0.0}}}}});
  EXPECT_THROW(quadratic_form(two, jump), std::invalid_argument);

  TrialFunction wrong_count;
  EXPECT_THROW(quadratic_form(two, wrong_count), std::invalid_argument);

  MetricGraph y{{{"c", -1.0}, {"a", 0.0}, {"b", 0.0}}, {{"e1", "c", "a", 1.0}, {"e2", "c", "b", 1.0}}, {}};
  TrialFunction vertex_jump;
  vertex_jump.finite.push_back({{TrialPiece{0.0, 1.0, {{1.0, 0.0, 0.0}}}}});
  vertex_jump.finite.push_back({{TrialPiece{0.0, 1.0, {{3.0, 0.0, 0.0}}}}});
  EXPECT_THROW(quadratic_form(y, vertex_jump), std::invalid_argument);

  TrialFunction zero = TrialFunction::constant(two, 0.0, 0.0);
  EXPECT_THROW(rayleigh_quotient(two, zero), std::invalid_argument);
}

TEST(QuadraticForm, PiecewiseTrialMatchesDirectIntegration) {
  // Two pieces: exp(x) on [0, 1], then e * exp(-(x - 1)) on [1, 2].
  MetricGraph g{{{"a", -1.0}, {"b", -0.5}}, {{"e", "a", "b", 2.0}}, {}};
  const double e = std::exp(1.0);
  TrialFunction tent;
  tent.finite.push_back({{TrialPiece{0.0, 1.0, {{1.0, 1.0, 0.0}}}, TrialPiece{1.0, 2.0, {{e, -1.0, 1.0}}}}});
  const auto q = quadratic_form(g, tent);
  const double half = 0.5 * (e * e - 1.0);  // int_0^1 exp(2x)
  EXPECT_NEAR(q.norm_squared, 2.0 * half, 1e-13);
  EXPECT_NEAR(q.dirichlet, 2.0 * half, 1e-13);
  EXPECT_NEAR(q.vertex, -1.0 * 1.0 - 0.5 * 1.0, 1e-14);
}

TEST(RayleighQuotient, GroundStateAttainsLambda0) {
  qgraph::testing::Rng rng(41);
  for (int i = 0; i < 80; ++i) {
    const auto g = qgraph::testing::random_graph(rng);
    const auto gs = find_ground_state(g);
    EXPECT_NEAR(rayleigh_quotient(g, TrialFunction::from_ground_state(g, gs)), gs.lambda0, 1e-10);
  }
}

TEST(RayleighQuotient, BoundedBelowByLambda0) {
  // Variational property with assorted exponential trials.
  qgraph::testing::Rng rng(42);
  for (int i = 0; i < 40; ++i) {
    const auto g = qgraph::testing::random_graph(rng);
    const auto gs = find_ground_state(g);
    const double tail = qgraph::testing::uniform(rng, 0.1, 3.0);
    EXPECT_GE(rayleigh_quotient(g, TrialFunction::constant(g, 1.0, tail)), gs.lambda0 - 1e-12);
  }
}

TEST(ScaledTrial, IdentityAtOne) {
  qgraph::testing::Rng rng(43);
  for (int i = 0; i < 40; ++i) {
    const auto g = qgraph::testing::random_graph(rng);
    if (g.finite_edges.empty()) continue;
    const auto gs = find_ground_state(g);
    for (const auto& e : g.finite_edges) {
      EXPECT_NEAR(scaled_trial_quotient(g, gs, e.id, 1.0), gs.lambda0, 1e-10);
      const auto parts = scaled_trial_parts(g, gs, e.id);
      EXPECT_NEAR(parts.segment_begin, 0.1 * e.length, 1e-15);
      EXPECT_NEAR(parts.segment_end, 0.9 * e.length, 1e-15);
      EXPECT_NEAR(parts.outside_norm + parts.inside_norm, 1.0, 1e-10);
    }
  }
}

TEST(ScaledTrial, ExplicitStretchedTrialAgrees) {
  qgraph::testing::Rng rng(44);
  for (int i = 0; i < 30; ++i) {
    const auto g = qgraph::testing::random_graph(rng);
    if (g.finite_edges.empty()) continue;
    const auto gs = find_ground_state(g);
    const auto& id = g.finite_edges[qgraph::testing::uniform_int(rng, 0, static_cast<int>(g.finite_edges.size()) - 1)].id;
    for (double xi : {0.5, 0.9999, 1.0001, 1.7}) {
      const auto st = stretched_trial(g, gs, id, xi);
      const double expected_length = g.finite_edges[*g.find_finite_edge(id)].length * (0.2 + 0.8 * xi);
      EXPECT_NEAR(st.graph.finite_edges[*st.graph.find_finite_edge(id)].length, expected_length, 1e-13);
      EXPECT_NEAR(rayleigh_quotient(st.graph, st.trial), scaled_trial_quotient(g, gs, id, xi), 1e-11);
      // The stretched trial bounds the stretched graph's ground state from above.
      EXPECT_GE(scaled_trial_quotient(g, gs, id, xi), find_ground_state(st.graph).lambda0 - 1e-10);
    }
  }
}

TEST(ScaledTrial, Errors) {
  const auto g = star();
  const auto gs = find_ground_state(g);
  EXPECT_THROW(scaled_trial_quotient(g, gs, "ea", 0.0), std::invalid_argument);
  EXPECT_THROW(scaled_trial_quotient(g, gs, "nope", 1.0), std::invalid_argument);
  EXPECT_THROW(scaled_trial_parts(g, gs, "ea", 0.6), std::invalid_argument);
  MetricGraph lead{{{"v", -2.0}}, {}, {{"l", "v"}}};
  EXPECT_THROW(scaled_trial_quotient(lead, find_ground_state(lead), "l", 1.0), std::invalid_argument);
}

TEST(ScaledTrialProperty, DirectionFollowsIndex) {
  qgraph::testing::Rng rng(45);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    qgraph::testing::Ranges r;
    r.length_hi = 1.5;
    const auto g = qgraph::testing::random_graph(rng, r);
    const auto gs = find_ground_state(g);
    for (const auto& e : g.finite_edges) {
      const int sigma = sign_of(gs.index(e.id));
      if (sigma == 0) continue;
      const double up = scaled_trial_quotient(g, gs, e.id, 1.0 + 1e-4) - gs.lambda0;
      const double down = scaled_trial_quotient(g, gs, e.id, 1.0 - 1e-4) - gs.lambda0;
      // psi'^2 - kappa^2 psi^2 = kappa^2 (b^2 - a^2) on the edge, so f'(1) = kappa^2 (a^2 - b^2) |J|.
      EXPECT_EQ(up > 0.0 ? 1 : -1, sigma) << e.id;
      EXPECT_EQ(down < 0.0 ? 1 : -1, sigma) << e.id;
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Trial, PieceEvaluation) {
  TrialPiece p{0.0, kInf, {{2.0, -1.0, 0.0}, {1.0, 0.0, 3.0}}};
  EXPECT_NEAR(p.value(0.0), 3.0, 1e-15);
  EXPECT_NEAR(p.value(1.0), 2.0 * std::exp(-1.0) + 1.0, 1e-15);
  EXPECT_NEAR(p.derivative(1.0), -2.0 * std::exp(-1.0), 1e-15);
}
