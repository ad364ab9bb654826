#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "qgraph/graph_io.hpp"
#include "support/random_graphs.hpp"

using namespace qgraph;

namespace {

const char* kGood = R"({
  "vertices": [{"id": "v", "alpha": -2}, {"id": "w", "alpha": 0}],
  "finite_edges": [{"id": "e", "from": "v", "to": "w", "length": 1.25}],
  "infinite_edges": [{"id": "l", "anchor": "w"}]
})";

std::string location_of(const std::string& text) {
  try {
    parse_graph(text, "t.json");
  } catch (const GraphParseError& e) {
    EXPECT_EQ(e.source(), "t.json");
    return e.location();
  }
  ADD_FAILURE() << "no GraphParseError";
  return {};
}

}  // namespace

TEST(Parse, Good) {
  const auto g = parse_graph(kGood);
  ASSERT_EQ(g.vertices.size(), 2u);
  EXPECT_EQ(g.vertices[0].id, "v");
  EXPECT_DOUBLE_EQ(g.vertices[0].alpha, -2.0);
  EXPECT_DOUBLE_EQ(g.finite_edges[0].length, 1.25);
  EXPECT_EQ(g.infinite_edges[0].anchor, "w");
}

TEST(Parse, ParseDoesNotValidate) {
  // Structure only; admissibility is load_graph's job.
  const auto g = parse_graph(R"({"vertices": [{"id": "v", "alpha": 3}], "finite_edges": [], "infinite_edges": []})");
  EXPECT_FALSE(validate(g).ok());
}

TEST(Parse, SyntaxErrorLocation) {
  const auto loc = location_of("{\n  \"vertices\": [\n}");
  EXPECT_NE(loc.find("line 3"), std::string::npos) << loc;
}

TEST(Parse, FieldErrors) {
  EXPECT_EQ(location_of(R"({"vertices": [], "finite_edges": []})"), "$.infinite_edges");
  EXPECT_EQ(location_of(R"({"vertices": [], "finite_edges": [], "infinite_edges": [], "x": 1})"), "$.x");
  EXPECT_EQ(location_of(R"({"vertices": [{"id": "v", "alpha": "big"}], "finite_edges": [], "infinite_edges": []})"),
            "vertices[0].alpha");
  EXPECT_EQ(location_of(R"({"vertices": [{"id": 3, "alpha": 1}], "finite_edges": [], "infinite_edges": []})"),
            "vertices[0].id");
  EXPECT_EQ(location_of(R"({"vertices": {}, "finite_edges": [], "infinite_edges": []})"), "vertices");
  EXPECT_EQ(location_of(R"({"vertices": [], "finite_edges": [{"id": "e", "from": "a", "to": "b"}], "infinite_edges": []})"),
            "finite_edges[0].length");
  EXPECT_EQ(location_of("[1, 2]"), "$");
}

TEST(Parse, RoundTripProperty) {
  qgraph::testing::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto g = qgraph::testing::random_graph(rng);
    EXPECT_EQ(parse_graph(dump_graph(g)), g);
  }
}

TEST(Files, SaveLoad) {
  const auto path = std::filesystem::temp_directory_path() / "qgraph_io_test.json";
  const auto g = parse_graph(kGood);
  save_graph(g, path);
  EXPECT_EQ(load_graph(path), g);
  std::filesystem::remove(path);
}

TEST(Files, LoadValidates) {
  const auto path = std::filesystem::temp_directory_path() / "qgraph_io_bad.json";
  std::ofstream(path) << R"({"vertices": [{"id": "v", "alpha": 3}], "finite_edges": [], "infinite_edges": []})";
  EXPECT_THROW(load_graph(path), InvalidGraph);
  std::filesystem::remove(path);
  EXPECT_THROW(load_graph(path), GraphParseError);
}
