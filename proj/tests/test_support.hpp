#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "rpewl/generators.hpp"
#include "rpewl/graph.hpp"

namespace rpewl::testing {

inline Graph from_graph6(const std::string& s) {
  const int n = s[0] - 63;
  std::vector<Arc> e;
  std::size_t bit = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++bit) {
      const int byte = s[1 + bit / 6] - 63;
      if (byte >> (5 - bit % 6) & 1) e.emplace_back(i, j);
    }
  return Graph::from_edge_list(n, false, e);
}

/// Every graph on 1..7 vertices, one per isomorphism class.
inline std::vector<Graph> atlas7() {
  std::ifstream in(std::string(RPEWL_TEST_DATA) + "/atlas7.g6");
  std::vector<Graph> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(from_graph6(line));
  return out;
}

/// Adds vertex n joined to the vertices in `mask`.
inline Graph extend(const Graph& g, unsigned mask) {
  auto e = g.edges();
  for (int v = 0; v < g.n(); ++v)
    if (mask >> v & 1u) e.emplace_back(v, g.n());
  return Graph::from_edge_list(g.n() + 1, false, e);
}

inline Graph random_connected(int n, std::uint64_t seed, double p = 0.35) {
  for (std::uint64_t s = seed;; s += 7919) {
    auto g = gen::gnp(n, p, s);
    if (g.connected()) return g;
  }
}

}  // namespace rpewl::testing
