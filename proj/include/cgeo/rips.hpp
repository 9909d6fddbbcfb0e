#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "cgeo/filtration.hpp"

namespace cgeo {

struct UnionFind {
  std::vector<std::uint32_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

struct Graph {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

/// Rips graph on a truncation: edge {x,y} iff 0 < d(x,y) <= R, or
/// 0 < d(x,y) < R when `strict` is set (the convention used by the
/// separation search). Uses the space's neighbour oracle when available.
inline Graph rips_graph(const Truncation& t, double R, bool strict = false) {
  Graph g;
  g.vertex_count = t.size();
  if (R < 0 || (strict && R == 0)) return g;
  const auto& fs = t.space();
  if (fs.has_neighbor_fn()) {
    // oracle enumerates d < r; for the closed variant pass just above R
    double r = strict ? R
                      : (t.integer_valued()
                             ? std::floor(R) + 1.0
                             : std::nextafter(R, std::numeric_limits<double>::infinity()));
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j : fs.neighbors(i, r))
        if (j < t.size() && j > i)
          g.edges.emplace_back(static_cast<std::uint32_t>(i),
                               static_cast<std::uint32_t>(j));
    return g;
  }
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      double d = t.dist(i, j);
      if (d > 0 && (strict ? d < R : d <= R))
        g.edges.emplace_back(static_cast<std::uint32_t>(i),
                             static_cast<std::uint32_t>(j));
    }
  return g;
}

/// Component labels (root indices compressed to 0..k-1) and component count.
inline std::pair<std::vector<std::uint32_t>, std::size_t> connected_components(
    const Graph& g) {
  UnionFind uf(g.vertex_count);
  for (auto [a, b] : g.edges) uf.unite(a, b);
  std::vector<std::uint32_t> labels(g.vertex_count);
  std::vector<std::int64_t> remap(g.vertex_count, -1);
  std::size_t next = 0;
  for (std::uint32_t v = 0; v < g.vertex_count; ++v) {
    std::uint32_t r = uf.find(v);
    if (remap[r] < 0) remap[r] = static_cast<std::int64_t>(next++);
    labels[v] = static_cast<std::uint32_t>(remap[r]);
  }
  return {std::move(labels), next};
}

}  // namespace cgeo
