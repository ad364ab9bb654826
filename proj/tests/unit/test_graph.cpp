#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "qgraph/graph.hpp"
#include "support/random_graphs.hpp"

using namespace qgraph;

namespace {

MetricGraph star() {
  return {{{"c", -1.0}, {"a", -1.5}, {"b", -1.5}},
          {{"ea", "c", "a", 1.0}, {"eb", "c", "b", 2.0}},
          {{"out", "c"}}};
}

void expect_violation(const MetricGraph& g, ViolationKind kind) {
  const auto r = validate(g);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.has(kind)) << r.summary();
}

}  // namespace

TEST(Validate, AcceptsStar) { EXPECT_TRUE(validate(star()).ok()); }

TEST(Validate, Empty) { expect_violation(MetricGraph{}, ViolationKind::EmptyGraph); }

TEST(Validate, DuplicateIds) {
  auto g = star();
  g.vertices.push_back({"a", -1.0});
  expect_violation(g, ViolationKind::DuplicateId);
  g = star();
  g.infinite_edges.push_back({"ea", "a"});  // edge ids share one namespace
  expect_violation(g, ViolationKind::DuplicateId);
}

TEST(Validate, UnknownEndpoint) {
  auto g = star();
  g.finite_edges.push_back({"x", "c", "nowhere", 1.0});
  expect_violation(g, ViolationKind::UnknownEndpoint);
  g = star();
  g.infinite_edges.push_back({"y", "nowhere"});
  expect_violation(g, ViolationKind::UnknownEndpoint);
}

TEST(Validate, SelfLoop) {
  auto g = star();
  g.finite_edges.push_back({"loop", "a", "a", 1.0});
  expect_violation(g, ViolationKind::SelfLoop);
}

TEST(Validate, Lengths) {
  auto g = star();
  g.finite_edges[0].length = 0.0;
  expect_violation(g, ViolationKind::NonPositiveLength);
  g.finite_edges[0].length = -1.0;
  expect_violation(g, ViolationKind::NonPositiveLength);
  g.finite_edges[0].length = std::numeric_limits<double>::infinity();
  expect_violation(g, ViolationKind::NonFiniteValue);
  g.finite_edges[0].length = std::nan("");
  expect_violation(g, ViolationKind::NonFiniteValue);
}

TEST(Validate, Couplings) {
  auto g = star();
  g.vertices[1].alpha = 0.5;
  expect_violation(g, ViolationKind::RepulsiveCoupling);
  g = star();
  for (auto& v : g.vertices) v.alpha = 0.0;
  expect_violation(g, ViolationKind::NoAttractiveVertex);
  g = star();
  g.vertices[0].alpha = std::nan("");
  expect_violation(g, ViolationKind::NonFiniteValue);
}

TEST(Validate, Connectivity) {
  auto g = star();
  g.vertices.push_back({"lonely", -1.0});
  expect_violation(g, ViolationKind::IsolatedVertex);
  g = star();
  g.vertices.push_back({"p", -1.0});
  g.vertices.push_back({"q", -1.0});
  g.finite_edges.push_back({"pq", "p", "q", 1.0});
  expect_violation(g, ViolationKind::Disconnected);
}

TEST(Validate, SingleVertexNeedsALead) {
  MetricGraph g{{{"v", -1.0}}, {}, {}};
  expect_violation(g, ViolationKind::IsolatedVertex);
  g.infinite_edges.push_back({"l", "v"});
  EXPECT_TRUE(validate(g).ok());
}

TEST(Validate, RequireValidCarriesReport) {
  auto g = star();
  g.vertices[1].alpha = 0.5;
  try {
    require_valid(g);
    FAIL() << "expected InvalidGraph";
  } catch (const InvalidGraph& e) {
    EXPECT_TRUE(e.report().has(ViolationKind::RepulsiveCoupling));
    EXPECT_NE(std::string(e.what()).find("repulsive coupling"), std::string::npos);
  }
}

TEST(Graph, DegreeAndIncidences) {
  const auto g = star();
  EXPECT_EQ(degree(g, "c"), 3);
  EXPECT_EQ(degree(g, "a"), 1);
  EXPECT_THROW(degree(g, "zz"), std::out_of_range);

  const auto inc = incidences(g);
  ASSERT_EQ(inc.size(), 3u);
  ASSERT_EQ(inc[0].size(), 3u);
  EXPECT_TRUE(inc[0][0].finite && inc[0][0].at_start && inc[0][0].edge == 0);
  EXPECT_TRUE(inc[0][1].finite && inc[0][1].edge == 1);
  EXPECT_FALSE(inc[0][2].finite);
  ASSERT_EQ(inc[1].size(), 1u);
  EXPECT_FALSE(inc[1][0].at_start);
}

TEST(Graph, Counts) {
  const auto g = star();
  EXPECT_EQ(g.num_unknowns(), 5u);
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_DOUBLE_EQ(g.total_attraction(), 4.0);
  EXPECT_EQ(g.find_finite_edge("eb"), 1u);
  EXPECT_FALSE(g.find_finite_edge("out").has_value());
  EXPECT_EQ(g.find_infinite_edge("out"), 0u);
}

TEST(Graph, Modifiers) {
  const auto g = star();
  EXPECT_DOUBLE_EQ(with_edge_length(g, "eb", 3.5).finite_edges[1].length, 3.5);
  EXPECT_DOUBLE_EQ(with_vertex_alpha(g, "a", -0.25).vertices[1].alpha, -0.25);
  EXPECT_THROW(with_edge_length(g, "out", 1.0), std::out_of_range);
  EXPECT_THROW(with_vertex_alpha(g, "nope", 1.0), std::out_of_range);

  const auto s = scaled(g, 2.0);
  EXPECT_DOUBLE_EQ(s.finite_edges[1].length, 4.0);
  EXPECT_DOUBLE_EQ(s.vertices[0].alpha, -0.5);
  EXPECT_THROW(scaled(g, 0.0), std::invalid_argument);
}

TEST(GraphProperty, GeneratedGraphsAreAdmissible) {
  qgraph::testing::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto g = qgraph::testing::random_graph(rng);
    ASSERT_TRUE(validate(g).ok()) << validate(g).summary();
    int total = 0;
    for (const auto& v : g.vertices) total += degree(g, v.id);
    EXPECT_EQ(total, static_cast<int>(2 * g.finite_edges.size() + g.infinite_edges.size()));
  }
}
