#pragma once

// JSON graph files:
//
//   {
//     "vertices":       [{"id": "c", "alpha": -1.0}, ...],
//     "finite_edges":   [{"id": "e1", "from": "c", "to": "v1", "length": 1.0}, ...],
//     "infinite_edges": [{"id": "lead", "anchor": "c"}, ...]
//   }
//
// Parsing is strict: unknown or missing fields are errors.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qgraph/graph.hpp"

namespace qgraph {

class GraphParseError : public std::runtime_error {
 public:
  GraphParseError(std::string source, std::string location, const std::string& what);

  const std::string& source() const noexcept { return source_; }
  /// "line 3, column 7" for syntax errors or a field path such as "vertices[1].alpha".
  const std::string& location() const noexcept { return location_; }

 private:
  std::string source_;
  std::string location_;
};

/// Parses without validating the graph semantics.
MetricGraph parse_graph(std::string_view text, std::string_view source = "<string>");
std::string dump_graph(const MetricGraph& graph);

/// Reads, parses and validates. Throws GraphParseError or InvalidGraph.
MetricGraph load_graph(const std::filesystem::path& path);
void save_graph(const MetricGraph& graph, const std::filesystem::path& path);

}  // namespace qgraph
