#pragma once

#include <random>
#include <vector>

#include "trine/graph.hpp"

namespace trine::testing {

// Each unordered pair gets no edge, an undirected edge, or one or two arcs.
inline MixedGraph random_graph(std::mt19937_64& rng, std::size_t n, double density = 0.5) {
  std::vector<Edge> dir, und;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) {
      if (u(rng) > density) continue;
      const double r = u(rng);
      if (r < 0.4) {
        und.emplace_back(a, b);
      } else if (r < 0.7) {
        dir.emplace_back(a, b);
      } else if (r < 0.9) {
        dir.emplace_back(b, a);
      } else {
        dir.emplace_back(a, b);
        dir.emplace_back(b, a);
      }
    }
  return MixedGraph(n, dir, und);
}

inline Coloring random_coloring(std::mt19937_64& rng, std::size_t n, bool ab_only = false) {
  std::uniform_int_distribution<int> d(0, ab_only ? 1 : 2);
  Coloring c(n);
  for (std::size_t v = 0; v < n; ++v) c[v] = static_cast<Color>(d(rng));
  return c;
}

// All 3^n colorings, node 0 least significant.
inline Coloring coloring_from_index(std::size_t index, std::size_t n) {
  Coloring c(n);
  for (std::size_t v = 0; v < n; ++v, index /= 3) c[v] = static_cast<Color>(index % 3);
  return c;
}

inline MixedGraph ring(std::size_t n) {
  std::vector<Edge> und;
  for (NodeId v = 0; v < n; ++v) und.emplace_back(v, static_cast<NodeId>((v + 1) % n));
  return MixedGraph(n, {}, und);
}

}  // namespace trine::testing
