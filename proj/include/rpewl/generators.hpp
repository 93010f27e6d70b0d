#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rpewl/graph.hpp"

namespace rpewl::gen {

Graph cycle(int n);
Graph path(int n);
Graph complete(int n);
/// Star with `leaves` leaves around center 0 (n = leaves + 1).
Graph star(int leaves);
/// Circular skip links: edges {i, i±1} and {i, i±skip} mod n.
Graph csl(int n, int skip);
Graph gnp(int n, double p, std::uint64_t seed);
Graph disjoint_union(const Graph& a, const Graph& b);
/// Cayley graph of Z4 x Z4 with connection set ±{(1,0),(0,1),(1,1)}.
Graph shrikhande();
/// 4x4 rook's graph: (i,j) ~ (k,l) iff same row or same column.
Graph rook4x4();
/// Triangle 0-1-2 with pendant vertex 3 attached to 2.
Graph triangle_with_pendant();

/// (C4, triangle plus pendant): same vertex and edge counts.
std::pair<Graph, Graph> fig_a_pair();
/// C4 with features [1,2,3,4] vs C4 with features [1,3,2,4].
std::pair<FeaturedGraph, FeaturedGraph> featured_c4_pair();
/// Smallest connected pair separated by resistance-distance refinement but
/// not by shortest-path refinement; found by `harness::find_cutvertex_pair`
/// and frozen here.
std::pair<Graph, Graph> cutvertex_pair();

// Family descriptor used by the CLI: name plus numeric parameters.
struct Family {
  std::string name;
  int n = 0;
  int skip = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
};

/// One graph for single families, two for the *_pair families.
std::vector<FeaturedGraph> generate(const Family& family);
std::vector<std::string> family_names();

}  // namespace rpewl::gen
