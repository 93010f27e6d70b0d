#include "rpewl/structure.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "rpewl/error.hpp"

namespace rpewl {

namespace {

struct IsoSearch {
  const FeaturedGraph& a;
  const FeaturedGraph& b;
  int n;
  std::vector<int> order;    // vertices of a in assignment order
  std::vector<int> map_ab;   // a -> b, -1 if unassigned
  std::vector<char> used_b;

  bool compatible(int u, int x) const {
    if (a.graph.degree(u) != b.graph.degree(x)) return false;
    if (a.graph.in_neighbors(u).size() != b.graph.in_neighbors(x).size()) return false;
    if (a.feature_row(u) != b.feature_row(x)) return false;
    for (int w = 0; w < n; ++w) {
      const int y = map_ab[w];
      if (y < 0) continue;
      if (a.graph.has_arc(u, w) != b.graph.has_arc(x, y)) return false;
      if (a.graph.has_arc(w, u) != b.graph.has_arc(y, x)) return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order.size()) return true;
    const int u = order[depth];
    for (int x = 0; x < n; ++x) {
      if (used_b[x] || !compatible(u, x)) continue;
      map_ab[u] = x;
      used_b[x] = 1;
      if (extend(depth + 1)) return true;
      map_ab[u] = -1;
      used_b[x] = 0;
    }
    return false;
  }
};

}  // namespace

bool brute_force_isomorphic(const FeaturedGraph& a, const FeaturedGraph& b) {
  if (a.n() > kIsomorphismOracleLimit || b.n() > kIsomorphismOracleLimit)
    throw Error("graph_core", "oracle scale exceeded (n > " + std::to_string(kIsomorphismOracleLimit) + ")");
  if (a.n() != b.n() || a.graph.directed() != b.graph.directed()) return false;
  if (a.graph.edge_count() != b.graph.edge_count()) return false;
  if (a.features.cols() != b.features.cols()) return false;
  const int n = a.n();

  // Multiset pruning on (degree, feature row).
  auto signature = [](const FeaturedGraph& g) {
    std::vector<std::pair<int, std::vector<double>>> s;
    for (int v = 0; v < g.n(); ++v) s.emplace_back(g.graph.degree(v), g.feature_row(v));
    std::sort(s.begin(), s.end());
    return s;
  };
  if (signature(a) != signature(b)) return false;

  IsoSearch search{a, b, n, {}, std::vector<int>(n, -1), std::vector<char>(n, 0)};
  // Assign in BFS order from high-degree vertices so adjacency constraints bite early.
  std::vector<char> placed(n, 0);
  std::vector<int> by_degree(n);
  for (int v = 0; v < n; ++v) by_degree[v] = v;
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](int x, int y) { return a.graph.degree(x) > a.graph.degree(y); });
  for (int s : by_degree) {
    if (placed[s]) continue;
    std::vector<int> queue{s};
    placed[s] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const int v = queue[h];
      search.order.push_back(v);
      for (const auto* list : {&a.graph.out_neighbors(v), &a.graph.in_neighbors(v)})
        for (int w : *list)
          if (!placed[w]) {
            placed[w] = 1;
            queue.push_back(w);
          }
    }
  }
  return search.extend(0);
}

std::vector<Arc> bridges(const Graph& g) {
  if (g.directed()) throw Error("graph_core", "bridges require an undirected graph");
  const int n = g.n();
  std::vector<int> disc(n, -1), low(n, 0), parent(n, -1);
  std::vector<std::size_t> next_edge(n, 0);
  std::vector<Arc> out;
  int timer = 0;
  std::vector<int> stack;
  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    disc[root] = low[root] = timer++;
    stack.push_back(root);
    while (!stack.empty()) {
      const int v = stack.back();
      const auto& nbrs = g.out_neighbors(v);
      if (next_edge[v] < nbrs.size()) {
        const int w = nbrs[next_edge[v]++];
        if (disc[w] < 0) {
          parent[w] = v;
          disc[w] = low[w] = timer++;
          stack.push_back(w);
        } else if (w != parent[v]) {
          low[v] = std::min(low[v], disc[w]);
        }
        continue;
      }
      stack.pop_back();
      const int p = parent[v];
      if (p >= 0) {
        low[p] = std::min(low[p], low[v]);
        if (low[v] > disc[p]) out.emplace_back(std::min(p, v), std::max(p, v));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BlockCutEdgeTree block_cut_edge_tree(const Graph& g) {
  if (g.directed()) throw Error("graph_core", "block cut-edge tree requires an undirected graph");
  if (!g.connected()) throw Error("graph_core", "block cut-edge tree requires a connected graph");
  const auto cut = bridges(g);
  std::vector<Arc> kept;
  for (const auto& e : g.edges())
    if (!std::binary_search(cut.begin(), cut.end(), e)) kept.push_back(e);
  int count = 0;
  const auto comp = Graph::from_edge_list(g.n(), false, kept).components(&count);

  BlockCutEdgeTree tree;
  tree.components.assign(count, {});
  for (int v = 0; v < g.n(); ++v) tree.components[comp[v]].push_back(v);
  for (const auto& [u, v] : cut) tree.tree_edges.emplace_back(comp[u], comp[v]);
  return tree;
}

std::string tree_canonical_form(int nodes, const std::vector<std::pair<int, int>>& edges) {
  if (nodes == 0) return "";
  if (static_cast<int>(edges.size()) != nodes - 1) throw Error("graph_core", "input is not a tree (edge count)");
  std::vector<std::vector<int>> adj(nodes);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= nodes || v >= nodes || u == v) throw Error("graph_core", "invalid tree edge");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  int comps = 0;
  std::vector<Arc> as_arcs;
  for (const auto& e : edges) as_arcs.push_back(e);
  Graph::from_edge_list(nodes, false, as_arcs).components(&comps);
  if (comps != 1) throw Error("graph_core", "input is not a tree (disconnected)");

  // Peel leaves to find the center(s).
  std::vector<int> deg(nodes);
  std::vector<int> layer;
  for (int v = 0; v < nodes; ++v) {
    deg[v] = static_cast<int>(adj[v].size());
    if (deg[v] <= 1) layer.push_back(v);
  }
  int remaining = nodes;
  while (remaining > 2) {
    remaining -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int v : layer)
      for (int w : adj[v])
        if (--deg[w] == 1) next.push_back(w);
    layer = std::move(next);
  }

  std::function<std::string(int, int)> encode = [&](int v, int parent) {
    std::vector<std::string> kids;
    for (int w : adj[v])
      if (w != parent) kids.push_back(encode(w, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (const auto& k : kids) s += k;
    return s + ")";
  };
  std::string best;
  for (int c : layer) {
    auto s = encode(c, -1);
    if (best.empty() || s < best) best = std::move(s);
  }
  return best;
}

bool tree_isomorphic(const BlockCutEdgeTree& a, const BlockCutEdgeTree& b) {
  const auto fa = tree_canonical_form(static_cast<int>(a.components.size()), a.tree_edges);
  const auto fb = tree_canonical_form(static_cast<int>(b.components.size()), b.tree_edges);
  return a.components.size() == b.components.size() && fa == fb;
}

}  // namespace rpewl
