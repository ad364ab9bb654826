#pragma once

// Metric graphs with delta coupling at the vertices.
//
// Units follow hbar = 2m = 1: the operator on every edge is -d^2/dx^2 and a
// bound state at energy -kappa^2 decays like exp(-kappa x) on a lead.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qgraph {

struct VertexSpec {
  std::string id;
  double alpha = 0.0;  ///< coupling strength; attractive when negative

  bool operator==(const VertexSpec&) const = default;
};

/// Finite edge. The local coordinate runs from `from` (x = 0) to `to` (x = length).
struct FiniteEdge {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;

  bool operator==(const FiniteEdge&) const = default;
};

/// Semi-infinite lead, x = 0 at the anchor vertex.
struct InfiniteEdge {
  std::string id;
  std::string anchor;

  bool operator==(const InfiniteEdge&) const = default;
};

struct MetricGraph {
  std::vector<VertexSpec> vertices;
  std::vector<FiniteEdge> finite_edges;
  std::vector<InfiniteEdge> infinite_edges;

  bool operator==(const MetricGraph&) const = default;

  std::optional<std::size_t> find_vertex(std::string_view id) const;
  std::optional<std::size_t> find_finite_edge(std::string_view id) const;
  std::optional<std::size_t> find_infinite_edge(std::string_view id) const;

  /// Number of edge coefficients: two per finite edge, one per lead.
  std::size_t num_unknowns() const { return 2 * finite_edges.size() + infinite_edges.size(); }
  std::size_t num_edges() const { return finite_edges.size() + infinite_edges.size(); }

  /// Sum of |alpha| over all vertices.
  double total_attraction() const;
};

enum class ViolationKind {
  EmptyGraph,
  DuplicateId,
  UnknownEndpoint,
  SelfLoop,
  NonPositiveLength,
  NonFiniteValue,
  RepulsiveCoupling,
  NoAttractiveVertex,
  IsolatedVertex,
  Disconnected,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string subject;  ///< offending vertex/edge id, empty for graph-wide issues
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string summary() const;
};

/// Checks the standing assumptions: nonrepulsive couplings with at least one
/// attractive vertex, positive finite lengths, no self-loops, connectivity.
ValidationReport validate(const MetricGraph& graph);

class InvalidGraph : public std::invalid_argument {
 public:
  explicit InvalidGraph(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Throws InvalidGraph when validate() reports anything.
void require_valid(const MetricGraph& graph);

/// Incident finite-edge endpoints plus incident leads. Throws std::out_of_range
/// for an unknown id.
int degree(const MetricGraph& graph, std::string_view vertex_id);

/// One end of an edge as seen from a vertex.
struct Incidence {
  std::size_t edge;   ///< index into finite_edges or infinite_edges
  bool finite;
  bool at_start;      ///< true when the vertex sits at x = 0 of the edge
};

/// Per-vertex incidence lists in graph order (finite edges first, then leads).
/// Endpoints that name unknown vertices are skipped.
std::vector<std::vector<Incidence>> incidences(const MetricGraph& graph);

MetricGraph with_edge_length(MetricGraph graph, std::string_view edge_id, double length);
MetricGraph with_vertex_alpha(MetricGraph graph, std::string_view vertex_id, double alpha);

/// Lengths multiplied by s and couplings divided by s; maps kappa0 to kappa0 / s.
MetricGraph scaled(MetricGraph graph, double s);

}  // namespace qgraph
