#include <cmath>

#include <gtest/gtest.h>

#include "qgraph/ground_state.hpp"
#include "qgraph/line_krein.hpp"
#include "support/random_graphs.hpp"

using namespace qgraph;

TEST(LineKrein, SingleSite) {
  for (double alpha : {-2.0, -0.3, -7.0}) {
    const auto gs = ground_state_line({{0.4}, {alpha}});
    EXPECT_NEAR(gs.kappa0, -alpha / 2.0, 1e-12);
    EXPECT_GT(gs.weights(0), 0.0);
  }
}

TEST(LineKrein, TwoEqualSites) {
  // Even state: kappa = (|alpha| / 2)(1 + exp(-kappa d)); iterate the contraction directly.
  const double alpha = -2.0, d = 1.0;
  double k = 1.0;
  for (int i = 0; i < 200; ++i) k = 0.5 * -alpha * (1.0 + std::exp(-k * d));
  const auto gs = ground_state_line({{0.0, d}, {alpha, alpha}});
  EXPECT_NEAR(gs.kappa0, k, 1e-12);
  EXPECT_NEAR(gs.weights(0), gs.weights(1), 1e-12);
}

TEST(LineKrein, GammaEntries) {
  const LineConfig c{{0.0, 1.5}, {-2.0, -0.5}};
  const auto g = gamma_line(c, 0.8);
  EXPECT_NEAR(g.entries(0, 0), 0.5 - 1.0 / 1.6, 1e-15);
  EXPECT_NEAR(g.entries(1, 1), 2.0 - 1.0 / 1.6, 1e-15);
  EXPECT_NEAR(g.entries(0, 1), -std::exp(-1.2) / 1.6, 1e-15);
  EXPECT_EQ(g.entries(0, 1), g.entries(1, 0));
  EXPECT_THROW(gamma_line(c, 0.0), std::invalid_argument);
}

TEST(LineKrein, LoopKernelClosedForm) {
  for (double k : {0.1, 1.0, 3.0}) {
    for (double d : {0.0, 0.7, 2.5}) {
      const double l = 5.0;
      EXPECT_NEAR(loop_kernel(k, l, d), std::cosh(k * (0.5 * l - d)) / (2.0 * k * std::sinh(0.5 * k * l)), 1e-13);
    }
  }
  // Long loops recover the line kernel.
  EXPECT_NEAR(loop_kernel(1.0, 200.0, 0.3), std::exp(-0.3) / 2.0, 1e-15);
}

TEST(LineKrein, Validation) {
  EXPECT_THROW(validate(LineConfig{{}, {}}), std::invalid_argument);
  EXPECT_THROW(validate(LineConfig{{0.0, 1.0}, {-1.0}}), std::invalid_argument);
  EXPECT_THROW(validate(LineConfig{{1.0, 0.0}, {-1.0, -1.0}}), std::invalid_argument);
  EXPECT_THROW(validate(LineConfig{{0.0, 0.0}, {-1.0, -1.0}}), std::invalid_argument);
  EXPECT_THROW(validate(LineConfig{{0.0}, {0.0}}), std::invalid_argument);
  EXPECT_THROW(validate(LineConfig{{0.0}, {1.0}}), std::invalid_argument);
  EXPECT_THROW(validate(LineConfig{{std::nan("")}, {-1.0}}), std::invalid_argument);
  EXPECT_THROW(validate(LoopConfig{0.0, {0.0}, {-1.0}}), std::invalid_argument);
  EXPECT_THROW(validate(LoopConfig{2.0, {0.0, 2.5}, {-1.0, -1.0}}), std::invalid_argument);
  EXPECT_NO_THROW(validate(LoopConfig{2.0, {0.0, 1.5}, {-1.0, -1.0}}));
}

TEST(LineKrein, MonotonicityPreconditions) {
  const LineConfig c{{0.0, 1.0, 2.0}, {-1.0, -2.0, -1.0}};
  EXPECT_THROW(check_monotonicity_line(c, c), std::invalid_argument);                                // nothing moved
  EXPECT_THROW(check_monotonicity_line(c, {{0.0, 0.5, 2.0}, {-1.0, -2.0, -1.0}}), std::invalid_argument);  // a gap shrinks
  EXPECT_THROW(check_monotonicity_line(c, {{0.0, 1.0, 3.0}, {-1.0, -2.5, -1.0}}), std::invalid_argument);  // strengths differ
  const auto r = check_monotonicity_line(c, {{0.0, 1.0, 3.0}, {-1.0, -2.0, -1.0}});
  EXPECT_GT(r.margin, 0.0);
  EXPECT_EQ(r.margin, r.lambda_after - r.lambda_before);
}

TEST(LineKreinProperty, Mu0IncreasesInKappa) {
  qgraph::testing::Rng rng(51);
  for (int i = 0; i < 50; ++i) {
    const auto c = qgraph::testing::random_line(rng, 1, 6);
    double prev = -std::numeric_limits<double>::infinity();
    for (double k = 0.05; k < 6.0; k *= 1.3) {
      const double m = mu0(gamma_line(c, k));
      EXPECT_GT(m, prev);
      prev = m;
    }
  }
}

TEST(LineKreinProperty, WeightsPositiveAndResolventVanishes) {
  qgraph::testing::Rng rng(52);
  for (int i = 0; i < 50; ++i) {
    const auto c = qgraph::testing::random_line(rng, 1, 6);
    const auto gs = ground_state_line(c);
    EXPECT_GT(gs.weights.minCoeff(), 0.0);
    EXPECT_NEAR(mu0(gamma_line(c, gs.kappa0)), 0.0, 1e-12);
    EXPECT_LT(std::abs(gs.lambda0 + gs.kappa0 * gs.kappa0), 1e-15 * gs.kappa0 * gs.kappa0);
  }
}

TEST(LineKreinProperty, AgreesWithChainGraph) {
  qgraph::testing::Rng rng(53);
  for (int i = 0; i < 60; ++i) {
    const auto c = qgraph::testing::random_line(rng, 1, 8);
    EXPECT_NEAR(ground_state_line(c).lambda0, find_ground_state(as_chain_graph(c)).lambda0, 1e-9);
  }
}

TEST(LineKreinProperty, LoopAgreesWithCycleGraph) {
  qgraph::testing::Rng rng(54);
  for (int i = 0; i < 40; ++i) {
    const auto c = qgraph::testing::random_loop(rng, 1, 6);
    EXPECT_NEAR(ground_state_loop(c).lambda0, find_ground_state(as_cycle_graph(c)).lambda0, 1e-9);
  }
}

TEST(LineKreinProperty, TranslationInvariance) {
  qgraph::testing::Rng rng(55);
  for (int i = 0; i < 50; ++i) {
    auto c = qgraph::testing::random_line(rng, 1, 6);
    const double before = ground_state_line(c).lambda0;
    const double shift = qgraph::testing::uniform(rng, -10.0, 10.0);
    for (auto& y : c.sites) y += shift;
    EXPECT_NEAR(ground_state_line(c).lambda0, before, 1e-12);
  }
}

TEST(LineKreinProperty, StretchingRaisesEnergy) {
  qgraph::testing::Rng rng(56);
  for (int i = 0; i < 50; ++i) {
    const auto c = qgraph::testing::random_line(rng, 2, 6);
    auto s = c;
    const int gap = qgraph::testing::uniform_int(rng, 0, static_cast<int>(c.sites.size()) - 2);
    const double eta = qgraph::testing::uniform(rng, 0.05, 1.0);
    for (std::size_t j = gap + 1; j < s.sites.size(); ++j) s.sites[j] += eta;
    EXPECT_GT(check_monotonicity_line(c, s).margin, 0.0);
  }
}

TEST(LineKreinProperty, LoopConvergesToLine) {
  qgraph::testing::Rng rng(57);
  for (int i = 0; i < 20; ++i) {
    const auto line = qgraph::testing::random_line(rng, 1, 4);
    const double target = ground_state_line(line).lambda0;
    double prev = std::numeric_limits<double>::infinity();
    for (double extra : {10.0, 20.0, 40.0}) {
      LoopConfig loop{line.sites.back() - line.sites.front() + extra, line.sites, line.strengths};
      for (auto& y : loop.sites) y -= line.sites.front();
      const double lam = ground_state_loop(loop).lambda0;
      EXPECT_LE(lam, target + 1e-12);  // the loop binds at least as strongly
      const double dist = std::abs(lam - target);
      EXPECT_LE(dist, prev);
      prev = dist;
    }
  }
}

TEST(LineKrein, GraphConversions) {
  const LineConfig c{{0.0, 1.0, 2.5}, {-1.0, -2.0, -0.5}};
  const auto g = as_chain_graph(c);
  EXPECT_EQ(g.vertices.size(), 3u);
  EXPECT_EQ(g.finite_edges.size(), 2u);
  EXPECT_DOUBLE_EQ(g.finite_edges[1].length, 1.5);
  EXPECT_EQ(g.infinite_edges.size(), 2u);

  const auto cyc = as_cycle_graph({3.0, {0.0}, {-1.0}});
  EXPECT_EQ(cyc.vertices.size(), 2u);
  EXPECT_EQ(cyc.finite_edges.size(), 2u);
  EXPECT_TRUE(validate(cyc).ok());
}
