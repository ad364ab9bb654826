#include "qgraph/graph.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace qgraph {

namespace {

template <typename Items>
std::optional<std::size_t> find_by_id(const Items& items, std::string_view id) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id == id) return i;
  }
  return std::nullopt;
}

struct DisjointSets {
  std::vector<std::size_t> parent;

  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::optional<std::size_t> MetricGraph::find_vertex(std::string_view id) const {
  return find_by_id(vertices, id);
}

std::optional<std::size_t> MetricGraph::find_finite_edge(std::string_view id) const {
  return find_by_id(finite_edges, id);
}

std::optional<std::size_t> MetricGraph::find_infinite_edge(std::string_view id) const {
  return find_by_id(infinite_edges, id);
}

double MetricGraph::total_attraction() const {
  double sum = 0.0;
  for (const auto& v : vertices) sum += std::abs(v.alpha);
  return sum;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptyGraph: return "empty graph";
    case ViolationKind::DuplicateId: return "duplicate id";
    case ViolationKind::UnknownEndpoint: return "unknown endpoint";
    case ViolationKind::SelfLoop: return "self-loop";
    case ViolationKind::NonPositiveLength: return "nonpositive length";
    case ViolationKind::NonFiniteValue: return "non-finite value";
    case ViolationKind::RepulsiveCoupling: return "repulsive coupling";
    case ViolationKind::NoAttractiveVertex: return "no attractive vertex";
    case ViolationKind::IsolatedVertex: return "isolated vertex";
    case ViolationKind::Disconnected: return "disconnected";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  for (const auto& v : violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

std::string ValidationReport::summary() const {
  if (ok()) return "graph is admissible";
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << to_string(violations[i].kind);
    if (!violations[i].subject.empty()) out << " [" << violations[i].subject << "]";
    out << ": " << violations[i].message;
  }
  return out.str();
}

ValidationReport validate(const MetricGraph& graph) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string subject, std::string message) {
    report.violations.push_back({kind, std::move(subject), std::move(message)});
  };

  if (graph.vertices.empty()) {
    add(ViolationKind::EmptyGraph, "", "graph has no vertices");
    return report;
  }

  std::unordered_map<std::string, std::size_t> vertex_index;
  bool any_attractive = false;
  for (std::size_t i = 0; i < graph.vertices.size(); ++i) {
    const auto& v = graph.vertices[i];
    if (!vertex_index.emplace(v.id, i).second) {
      add(ViolationKind::DuplicateId, v.id, "vertex id used more than once");
    }
    if (!std::isfinite(v.alpha)) {
      add(ViolationKind::NonFiniteValue, v.id, "alpha is not finite");
    } else if (v.alpha > 0.0) {
      add(ViolationKind::RepulsiveCoupling, v.id, "alpha must be <= 0");
    } else if (v.alpha < 0.0) {
      any_attractive = true;
    }
  }
  if (!any_attractive) {
    add(ViolationKind::NoAttractiveVertex, "", "at least one vertex needs alpha < 0");
  }

  std::unordered_set<std::string> edge_ids;
  DisjointSets components(graph.vertices.size());
  std::vector<int> deg(graph.vertices.size(), 0);

  auto lookup = [&](const std::string& edge, const std::string& vertex) -> std::optional<std::size_t> {
    auto it = vertex_index.find(vertex);
    if (it == vertex_index.end()) {
      add(ViolationKind::UnknownEndpoint, edge, "references unknown vertex '" + vertex + "'");
      return std::nullopt;
    }
    return it->second;
  };

  for (const auto& e : graph.finite_edges) {
    if (!edge_ids.insert(e.id).second) {
      add(ViolationKind::DuplicateId, e.id, "edge id used more than once");
    }
    if (!std::isfinite(e.length)) {
      add(ViolationKind::NonFiniteValue, e.id, "length is not finite");
    } else if (e.length <= 0.0) {
      add(ViolationKind::NonPositiveLength, e.id, "length must be > 0");
    }
    if (e.from == e.to) {
      add(ViolationKind::SelfLoop, e.id,
          "self-loops must be split with an auxiliary alpha = 0 vertex");
    }
    auto a = lookup(e.id, e.from);
    auto b = lookup(e.id, e.to);
    if (a) ++deg[*a];
    if (b) ++deg[*b];
    if (a && b) components.unite(*a, *b);
  }
  for (const auto& e : graph.infinite_edges) {
    if (!edge_ids.insert(e.id).second) {
      add(ViolationKind::DuplicateId, e.id, "edge id used more than once");
    }
    if (auto a = lookup(e.id, e.anchor)) ++deg[*a];
  }

  for (std::size_t i = 0; i < graph.vertices.size(); ++i) {
    if (deg[i] == 0) {
      add(ViolationKind::IsolatedVertex, graph.vertices[i].id, "vertex has no incident edge");
    }
  }

  std::unordered_set<std::size_t> roots;
  for (std::size_t i = 0; i < graph.vertices.size(); ++i) roots.insert(components.find(i));
  if (roots.size() > 1) {
    add(ViolationKind::Disconnected, "",
        "graph has " + std::to_string(roots.size()) +
            " connected components; solve each component separately");
  }
  return report;
}

InvalidGraph::InvalidGraph(ValidationReport report)
    : std::invalid_argument("invalid graph: " + report.summary()), report_(std::move(report)) {}

void require_valid(const MetricGraph& graph) {
  auto report = validate(graph);
  if (!report.ok()) throw InvalidGraph(std::move(report));
}

int degree(const MetricGraph& graph, std::string_view vertex_id) {
  if (!graph.find_vertex(vertex_id)) {
    throw std::out_of_range("unknown vertex '" + std::string(vertex_id) + "'");
  }
  int n = 0;
  for (const auto& e : graph.finite_edges) {
    if (e.from == vertex_id) ++n;
    if (e.to == vertex_id) ++n;
  }
  for (const auto& e : graph.infinite_edges) {
    if (e.anchor == vertex_id) ++n;
  }
  return n;
}

std::vector<std::vector<Incidence>> incidences(const MetricGraph& graph) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < graph.vertices.size(); ++i) index.emplace(graph.vertices[i].id, i);

  std::vector<std::vector<Incidence>> out(graph.vertices.size());
  for (std::size_t e = 0; e < graph.finite_edges.size(); ++e) {
    const auto& edge = graph.finite_edges[e];
    if (auto it = index.find(edge.from); it != index.end()) out[it->second].push_back({e, true, true});
    if (auto it = index.find(edge.to); it != index.end()) out[it->second].push_back({e, true, false});
  }
  for (std::size_t e = 0; e < graph.infinite_edges.size(); ++e) {
    if (auto it = index.find(graph.infinite_edges[e].anchor); it != index.end()) {
      out[it->second].push_back({e, false, true});
    }
  }
  return out;
}

MetricGraph with_edge_length(MetricGraph graph, std::string_view edge_id, double length) {
  auto e = graph.find_finite_edge(edge_id);
  if (!e) throw std::out_of_range("unknown finite edge '" + std::string(edge_id) + "'");
  graph.finite_edges[*e].length = length;
  return graph;
}

MetricGraph with_vertex_alpha(MetricGraph graph, std::string_view vertex_id, double alpha) {
  auto v = graph.find_vertex(vertex_id);
  if (!v) throw std::out_of_range("unknown vertex '" + std::string(vertex_id) + "'");
  graph.vertices[*v].alpha = alpha;
  return graph;
}

MetricGraph scaled(MetricGraph graph, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("scale factor must be positive");
  for (auto& e : graph.finite_edges) e.length *= s;
  for (auto& v : graph.vertices) v.alpha /= s;
  return graph;
}

}  // namespace qgraph
