#include "rpewl/generators.hpp"

#include <random>

#include "rpewl/error.hpp"

namespace rpewl::gen {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error("graph_core", message);
}

}  // namespace

Graph cycle(int n) {
  require(n >= 3, "cycle needs n >= 3");
  std::vector<Arc> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph::from_edge_list(n, false, e);
}

Graph path(int n) {
  require(n >= 1, "path needs n >= 1");
  std::vector<Arc> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edge_list(n, false, e);
}

Graph complete(int n) {
  require(n >= 0, "complete graph needs n >= 0");
  std::vector<Arc> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edge_list(n, false, e);
}

Graph star(int leaves) {
  require(leaves >= 0, "star needs leaves >= 0");
  std::vector<Arc> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edge_list(leaves + 1, false, e);
}

Graph csl(int n, int skip) {
  require(n >= 5, "csl needs n >= 5");
  require(skip >= 2 && skip <= n - 2 && 2 * skip != n, "csl skip must satisfy 2 <= s <= n-2 and 2s != n");
  std::vector<Arc> e;
  for (int i = 0; i < n; ++i) {
    e.emplace_back(i, (i + 1) % n);
    e.emplace_back(i, (i + skip) % n);
  }
  return Graph::from_edge_list(n, false, e);
}

Graph gnp(int n, double p, std::uint64_t seed) {
  require(n >= 0 && p >= 0.0 && p <= 1.0, "gnp needs n >= 0 and 0 <= p <= 1");
  std::mt19937_64 rng(seed);
  std::vector<Arc> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      // 53 random bits mapped to [0,1); avoids implementation-defined distributions.
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < p) e.emplace_back(i, j);
    }
  return Graph::from_edge_list(n, false, e);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  require(a.directed() == b.directed(), "disjoint union of mixed directedness");
  std::vector<Arc> e = a.edges();
  for (const auto& [u, v] : b.edges()) e.emplace_back(u + a.n(), v + a.n());
  return Graph::from_edge_list(a.n() + b.n(), a.directed(), e);
}

Graph shrikhande() {
  const int shifts[3][2] = {{1, 0}, {0, 1}, {1, 1}};
  std::vector<Arc> e;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (const auto& s : shifts)
        for (int sign : {1, -1}) {
          const int a2 = ((a + sign * s[0]) % 4 + 4) % 4;
          const int b2 = ((b + sign * s[1]) % 4 + 4) % 4;
          e.emplace_back(4 * a + b, 4 * a2 + b2);
        }
  return Graph::from_edge_list(16, false, e);
}

Graph rook4x4() {
  std::vector<Arc> e;
  for (int u = 0; u < 16; ++u)
    for (int v = u + 1; v < 16; ++v)
      if (u / 4 == v / 4 || u % 4 == v % 4) e.emplace_back(u, v);
  return Graph::from_edge_list(16, false, e);
}

Graph triangle_with_pendant() { return Graph::from_edge_list(4, false, {{0, 1}, {1, 2}, {2, 0}, {2, 3}}); }

std::pair<Graph, Graph> fig_a_pair() { return {cycle(4), triangle_with_pendant()}; }

std::pair<FeaturedGraph, FeaturedGraph> featured_c4_pair() {
  DenseMatrix xg = DenseMatrix::from_rows(4, 1, {1, 2, 3, 4});
  DenseMatrix xh = DenseMatrix::from_rows(4, 1, {1, 3, 2, 4});
  return {FeaturedGraph(cycle(4), std::move(xg)), FeaturedGraph(cycle(4), std::move(xh))};
}

std::pair<Graph, Graph> cutvertex_pair() {
  // Frozen output of harness::find_cutvertex_pair(): first pair in
  // (n, adjacency-bitmask) order.
  return {Graph::from_edge_list(6, false, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}}),
          Graph::from_edge_list(6, false, {{0, 1}, {0, 3}, {0, 5}, {1, 2}, {1, 5}, {2, 3}, {2, 4}, {3, 4}})};
}

std::vector<FeaturedGraph> generate(const Family& f) {
  const auto& name = f.name;
  if (name == "cycle") return {FeaturedGraph(cycle(f.n))};
  if (name == "path") return {FeaturedGraph(path(f.n))};
  if (name == "complete") return {FeaturedGraph(complete(f.n))};
  if (name == "star") return {FeaturedGraph(star(f.n))};
  if (name == "csl") return {FeaturedGraph(csl(f.n, f.skip))};
  if (name == "gnp") return {FeaturedGraph(gnp(f.n, f.p, f.seed))};
  if (name == "shrikhande") return {FeaturedGraph(shrikhande())};
  if (name == "rook4x4") return {FeaturedGraph(rook4x4())};
  if (name == "fig_a_pair") {
    auto [a, b] = fig_a_pair();
    return {FeaturedGraph(std::move(a)), FeaturedGraph(std::move(b))};
  }
  if (name == "featured_c4_pair") {
    auto [a, b] = featured_c4_pair();
    return {std::move(a), std::move(b)};
  }
  if (name == "cutvertex_pair") {
    auto [a, b] = cutvertex_pair();
    return {FeaturedGraph(std::move(a)), FeaturedGraph(std::move(b))};
  }
  throw Error("graph_core", "unknown family: " + name);
}

std::vector<std::string> family_names() {
  return {"cycle",      "path",    "complete",   "star",       "csl",           "gnp",
          "shrikhande", "rook4x4", "fig_a_pair", "featured_c4_pair", "cutvertex_pair"};
}

}  // namespace rpewl::gen
