#include "qgraph/graph_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace qgraph {

using nlohmann::json;

GraphParseError::GraphParseError(std::string source, std::string location, const std::string& what)
    : std::runtime_error(source + ": " + location + ": " + what),
      source_(std::move(source)),
      location_(std::move(location)) {}

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw GraphParseError(source_, path, what);
  }

  void expect_object(const json& node, const std::string& path,
                     std::initializer_list<const char*> fields) const {
    if (!node.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : node.items()) {
      bool known = false;
      for (const char* f : fields) known = known || key == f;
      if (!known) fail(path + "." + key, "unknown field");
    }
    for (const char* f : fields) {
      if (!node.contains(f)) fail(path + "." + f, "missing field");
    }
  }

  std::string string_field(const json& node, const std::string& path, const char* key) const {
    const auto& v = node.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
  }

  double number_field(const json& node, const std::string& path, const char* key) const {
    const auto& v = node.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
  }

  const json& array_field(const json& node, const char* key) const {
    const auto& v = node.at(key);
    if (!v.is_array()) fail(key, "expected an array");
    return v;
  }

 private:
  std::string source_;
};

}  // namespace

MetricGraph parse_graph(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw GraphParseError(std::string(source), line_column(text, e.byte > 0 ? e.byte - 1 : 0),
                          "malformed JSON");
  }

  Reader r{std::string(source)};
  r.expect_object(doc, "$", {"vertices", "finite_edges", "infinite_edges"});

  MetricGraph g;
  const auto& vertices = r.array_field(doc, "vertices");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string path = "vertices[" + std::to_string(i) + "]";
    r.expect_object(vertices[i], path, {"id", "alpha"});
    g.vertices.push_back({r.string_field(vertices[i], path, "id"),
                          r.number_field(vertices[i], path, "alpha")});
  }
  const auto& finite = r.array_field(doc, "finite_edges");
  for (std::size_t i = 0; i < finite.size(); ++i) {
    const std::string path = "finite_edges[" + std::to_string(i) + "]";
    r.expect_object(finite[i], path, {"id", "from", "to", "length"});
    g.finite_edges.push_back({r.string_field(finite[i], path, "id"),
                              r.string_field(finite[i], path, "from"),
                              r.string_field(finite[i], path, "to"),
                              r.number_field(finite[i], path, "length")});
  }
  const auto& leads = r.array_field(doc, "infinite_edges");
  for (std::size_t i = 0; i < leads.size(); ++i) {
    const std::string path = "infinite_edges[" + std::to_string(i) + "]";
    r.expect_object(leads[i], path, {"id", "anchor"});
    g.infinite_edges.push_back({r.string_field(leads[i], path, "id"),
                                r.string_field(leads[i], path, "anchor")});
  }
  return g;
}

std::string dump_graph(const MetricGraph& graph) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& v : graph.vertices) doc["vertices"].push_back({{"id", v.id}, {"alpha", v.alpha}});
  doc["finite_edges"] = json::array();
  for (const auto& e : graph.finite_edges) {
    doc["finite_edges"].push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"length", e.length}});
  }
  doc["infinite_edges"] = json::array();
  for (const auto& e : graph.infinite_edges) {
    doc["infinite_edges"].push_back({{"id", e.id}, {"anchor", e.anchor}});
  }
  return doc.dump(2) + "\n";
}

MetricGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphParseError(path.string(), "file", "cannot open");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto graph = parse_graph(buffer.str(), path.string());
  require_valid(graph);
  return graph;
}

void save_graph(const MetricGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_graph(graph);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qgraph
