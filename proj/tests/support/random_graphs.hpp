#pragma once

// Hand-rolled generators for property tests. Every generator draws from the
// caller's engine only, so a fixed seed reproduces the whole case list.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/line_krein.hpp"

namespace qgraph::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

struct Ranges {
  double alpha_lo = -2.0, alpha_hi = -0.2;
  double length_lo = 0.2, length_hi = 2.0;
};

inline std::string vid(int i) { return "v" + std::to_string(i); }

/// Path of n vertices with a lead at each end vertex.
inline MetricGraph random_chain(Rng& rng, int n_min = 2, int n_max = 5, const Ranges& r = {}) {
  MetricGraph g;
  const int n = uniform_int(rng, n_min, n_max);
  for (int i = 0; i < n; ++i) g.vertices.push_back({vid(i), uniform(rng, r.alpha_lo, r.alpha_hi)});
  for (int i = 0; i + 1 < n; ++i) {
    g.finite_edges.push_back({"e" + std::to_string(i), vid(i), vid(i + 1), uniform(rng, r.length_lo, r.length_hi)});
  }
  g.infinite_edges.push_back({"left", vid(0)});
  g.infinite_edges.push_back({"right", vid(n - 1)});
  return g;
}

/// Random tree on n vertices, optionally closed by one extra edge into a
/// cycle, with 0 to 3 leads. Some vertices get Kirchhoff coupling (alpha = 0);
/// at least one stays attractive.
inline MetricGraph random_branched(Rng& rng, int n_min = 3, int n_max = 6, const Ranges& r = {}) {
  MetricGraph g;
  const int n = uniform_int(rng, n_min, n_max);
  for (int i = 0; i < n; ++i) {
    const bool kirchhoff = i > 0 && uniform(rng, 0.0, 1.0) < 0.2;
    g.vertices.push_back({vid(i), kirchhoff ? 0.0 : uniform(rng, r.alpha_lo, r.alpha_hi)});
  }
  std::vector<std::pair<int, int>> used;
  for (int i = 1; i < n; ++i) {
    const int parent = uniform_int(rng, 0, i - 1);
    used.emplace_back(parent, i);
    g.finite_edges.push_back({"e" + std::to_string(i - 1), vid(parent), vid(i), uniform(rng, r.length_lo, r.length_hi)});
  }
  if (n >= 3 && uniform(rng, 0.0, 1.0) < 0.4) {
    const int a = uniform_int(rng, 0, n - 1);
    int b = uniform_int(rng, 0, n - 2);
    if (b >= a) ++b;
    const bool exists = std::any_of(used.begin(), used.end(), [&](auto p) {
      return (p.first == a && p.second == b) || (p.first == b && p.second == a);
    });
    if (!exists) {
      g.finite_edges.push_back({"e" + std::to_string(n - 1), vid(a), vid(b), uniform(rng, r.length_lo, r.length_hi)});
    }
  }
  const int leads = uniform_int(rng, 0, 3);
  for (int k = 0; k < leads; ++k) g.infinite_edges.push_back({"lead" + std::to_string(k), vid(uniform_int(rng, 0, n - 1))});
  return g;
}

inline MetricGraph random_graph(Rng& rng, const Ranges& r = {}) {
  return uniform(rng, 0.0, 1.0) < 0.4 ? random_chain(rng, 1, 5, r) : random_branched(rng, 2, 6, r);
}

struct LineRanges {
  double alpha_lo = -3.0, alpha_hi = -0.2;
  double gap_lo = 0.2, gap_hi = 3.0;
};

inline LineConfig random_line(Rng& rng, int n_min, int n_max, const LineRanges& r = {}) {
  LineConfig c;
  const int n = uniform_int(rng, n_min, n_max);
  double y = uniform(rng, -2.0, 2.0);
  for (int i = 0; i < n; ++i) {
    if (i > 0) y += uniform(rng, r.gap_lo, r.gap_hi);
    c.sites.push_back(y);
    c.strengths.push_back(uniform(rng, r.alpha_lo, r.alpha_hi));
  }
  return c;
}

/// Sites spread over a loop with every neighbour gap (wrap-around included) in range.
inline LoopConfig random_loop(Rng& rng, int n_min, int n_max, const LineRanges& r = {}) {
  LoopConfig c;
  const int n = uniform_int(rng, n_min, n_max);
  double y = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i > 0) y += uniform(rng, r.gap_lo, r.gap_hi);
    c.sites.push_back(y);
    c.strengths.push_back(uniform(rng, r.alpha_lo, r.alpha_hi));
  }
  c.circumference = y + uniform(rng, r.gap_lo, r.gap_hi);
  return c;
}

}  // namespace qgraph::testing
