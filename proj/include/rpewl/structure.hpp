#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rpewl/graph.hpp"

namespace rpewl {

inline constexpr int kIsomorphismOracleLimit = 10;

/// Exact feature isomorphism by pruned backtracking. Refuses n > 10.
bool brute_force_isomorphic(const FeaturedGraph& a, const FeaturedGraph& b);

/// Cut edges of an undirected graph as (u < v) pairs, sorted.
std::vector<Arc> bridges(const Graph& g);

struct BlockCutEdgeTree {
  /// Edge-biconnected components, each sorted; ordered by smallest vertex.
  std::vector<std::vector<Vertex>> components;
  /// Component index pairs, one per bridge.
  std::vector<std::pair<int, int>> tree_edges;
};

BlockCutEdgeTree block_cut_edge_tree(const Graph& g);

/// Unlabeled tree isomorphism via AHU canonical strings rooted at centers.
bool tree_isomorphic(const BlockCutEdgeTree& a, const BlockCutEdgeTree& b);
/// Canonical form of the tree (center-rooted, minimal over two centers).
std::string tree_canonical_form(int nodes, const std::vector<std::pair<int, int>>& edges);

}  // namespace rpewl
