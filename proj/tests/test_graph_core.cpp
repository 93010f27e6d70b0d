#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rpewl/error.hpp"
#include "rpewl/generators.hpp"
#include "rpewl/graph.hpp"
#include "rpewl/structure.hpp"

using namespace rpewl;

namespace {

// Independent component counter (union-find), used as the bridge oracle.
int count_components(int n, const std::vector<Arc>& edges) {
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int count = n;
  for (auto [u, v] : edges) {
    const int a = find(u), b = find(v);
    if (a != b) {
      parent[a] = b;
      --count;
    }
  }
  return count;
}

std::vector<Arc> oracle_bridges(const Graph& g) {
  std::vector<Arc> out;
  const auto edges = g.edges();
  const int base = count_components(g.n(), edges);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto rest = edges;
    rest.erase(rest.begin() + static_cast<long>(i));
    if (count_components(g.n(), rest) > base) out.push_back(edges[i]);
  }
  return out;
}

Graph from_mask(int n, unsigned mask) {
  std::vector<Arc> e;
  int bit = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v, ++bit)
      if (mask >> bit & 1u) e.emplace_back(u, v);
  return Graph::from_edge_list(n, false, e);
}

}  // namespace

TEST_CASE("from_edge_list builds canonical graphs") {
  const auto c3 = Graph::from_edge_list(3, false, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(c3.edge_count() == 3);
  CHECK(c3.arcs().size() == 6);
  CHECK(c3.has_arc(2, 0));
  CHECK(c3.has_arc(0, 2));

  const auto k2 = Graph::from_edge_list(2, false, {{0, 1}, {1, 0}});
  CHECK(k2.edge_count() == 1);

  CHECK_THROWS_AS(Graph::from_edge_list(2, false, {{0, 0}}), Error);
  CHECK_THROWS_AS(Graph::from_edge_list(2, false, {{0, 2}}), Error);
  CHECK_THROWS_AS(Graph::from_edge_list(2, false, {{-1, 1}}), Error);

  const auto d = Graph::from_edge_list(2, true, {{0, 1}, {0, 1}});
  CHECK(d.edge_count() == 1);
  CHECK(!d.has_arc(1, 0));
  CHECK(d.in_neighbors(1) == std::vector<int>{0});
}

TEST_CASE("empty and single-vertex graphs") {
  const auto g0 = Graph::from_edge_list(0, false, {});
  CHECK(g0.n() == 0);
  CHECK(g0.connected());
  const auto g1 = Graph::from_edge_list(1, false, {});
  CHECK(g1.connected());
  CHECK(bridges(g1).empty());
}

TEST_CASE("featured graph validation") {
  const auto g = gen::path(2);
  CHECK_THROWS_AS(FeaturedGraph(g, DenseMatrix(3, 1)), Error);
  DenseMatrix bad(2, 1);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(FeaturedGraph(g, bad), Error);
  FeaturedGraph plain(g);
  CHECK(plain.feature_row(1) == std::vector<double>{1.0});
}

TEST_CASE("apply_permutation") {
  const auto c4 = gen::cycle(4);
  CHECK(apply_permutation(c4, Permutation::identity(4)) == c4);
  CHECK(apply_permutation(c4, Permutation({1, 2, 3, 0})) == c4);
  const auto p3 = gen::path(3);
  const auto swapped = apply_permutation(p3, Permutation({2, 1, 0}));
  CHECK(swapped.edges() == p3.edges());
  CHECK_THROWS_AS(apply_permutation(p3, Permutation::identity(4)), Error);
  CHECK_THROWS_AS(Permutation({0, 0, 1}), Error);

  DenseMatrix x(3, 1);
  x(0, 0) = 7;
  const auto moved = apply_permutation(FeaturedGraph(p3, x), Permutation({2, 0, 1}));
  CHECK(moved.features(2, 0) == 7);
}

TEST_CASE("permutation inverse composes to identity") {
  const auto p = Permutation::random(9, 42);
  const auto q = p.inverse();
  for (int v = 0; v < 9; ++v) CHECK(q(p(v)) == v);
  CHECK(Permutation::random(9, 42).mapping() == p.mapping());
}

TEST_CASE("generators") {
  const auto csl = gen::csl(41, 2);
  CHECK(csl.n() == 41);
  for (int d : csl.degree_sequence()) CHECK(d == 4);
  CHECK_THROWS_AS(gen::csl(41, 1), Error);
  CHECK_THROWS_AS(gen::csl(41, 0), Error);
  CHECK_THROWS_AS(gen::csl(41, 40), Error);

  auto [g, h] = gen::fig_a_pair();
  auto dg = g.degree_sequence(), dh = h.degree_sequence();
  std::sort(dg.begin(), dg.end());
  std::sort(dh.begin(), dh.end());
  CHECK(dg == std::vector<int>{2, 2, 2, 2});
  CHECK(dh == std::vector<int>{1, 2, 2, 3});
  CHECK(g.edge_count() == 4);
  CHECK(h.edge_count() == 4);

  CHECK(gen::star(3).degree(0) == 3);
  CHECK(gen::complete(5).edge_count() == 10);
  CHECK(gen::path(4).edge_count() == 3);
}

TEST_CASE("shrikhande and rook are SRG(16,6,2,2) with different neighborhoods") {
  for (const auto& g : {gen::shrikhande(), gen::rook4x4()}) {
    REQUIRE(g.n() == 16);
    for (int u = 0; u < 16; ++u) {
      CHECK(g.degree(u) == 6);
      for (int v = u + 1; v < 16; ++v) {
        int common = 0;
        for (int w = 0; w < 16; ++w) common += g.has_arc(u, w) && g.has_arc(v, w);
        CHECK(common == 2);
      }
    }
  }
  // Rook neighborhoods are two disjoint triangles; Shrikhande's are 6-cycles.
  auto nbr_components = [](const Graph& g) {
    const auto& nb = g.out_neighbors(0);
    std::vector<Arc> e;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j)
        if (g.has_arc(nb[i], nb[j])) e.emplace_back(i, j);
    return count_components(6, e);
  };
  CHECK(nbr_components(gen::rook4x4()) == 2);
  CHECK(nbr_components(gen::shrikhande()) == 1);
}

TEST_CASE("generators are deterministic") {
  CHECK(gen::gnp(12, 0.3, 5) == gen::gnp(12, 0.3, 5));
  CHECK(gen::csl(41, 9) == gen::csl(41, 9));
  std::ostringstream a, b;
  write_edge_list(a, FeaturedGraph(gen::gnp(10, 0.5, 1)));
  write_edge_list(b, FeaturedGraph(gen::gnp(10, 0.5, 1)));
  CHECK(a.str() == b.str());
}

TEST_CASE("brute force isomorphism") {
  const auto c4 = gen::cycle(4);
  CHECK(brute_force_isomorphic(FeaturedGraph(c4), FeaturedGraph(apply_permutation(c4, Permutation({1, 2, 3, 0})))));
  CHECK(!brute_force_isomorphic(FeaturedGraph(c4), FeaturedGraph(gen::triangle_with_pendant())));
  auto [fa, fb] = gen::featured_c4_pair();
  CHECK(!brute_force_isomorphic(fa, fb));
  CHECK(brute_force_isomorphic(fa, apply_permutation(fa, Permutation({3, 0, 1, 2}))));
  CHECK_THROWS_WITH_AS(brute_force_isomorphic(FeaturedGraph(gen::cycle(11)), FeaturedGraph(gen::cycle(11))),
                       doctest::Contains("oracle scale exceeded"), Error);
}

TEST_CASE("featured C4 pair has no feature-preserving automorphism") {
  // The 8 automorphisms of C4 are rotations and reflections.
  auto [fa, fb] = gen::featured_c4_pair();
  int matches = 0;
  for (int r = 0; r < 4; ++r)
    for (int flip = 0; flip < 2; ++flip) {
      std::vector<int> m(4);
      for (int v = 0; v < 4; ++v) m[v] = flip ? (4 - v + r) % 4 : (v + r) % 4;
      bool ok = true;
      for (int v = 0; v < 4; ++v) ok &= fa.features(v, 0) == fb.features(m[v], 0);
      for (auto [u, v] : fa.graph.edges()) ok &= fb.graph.has_arc(m[u], m[v]);
      matches += ok;
    }
  CHECK(matches == 0);
}

TEST_CASE("isomorphism preserved under random permutations") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    FeaturedGraph g(gen::gnp(8, 0.4, s));
    CHECK(brute_force_isomorphic(g, apply_permutation(g, Permutation::random(8, s + 100))));
  }
}

TEST_CASE("bridges") {
  CHECK(bridges(gen::path(3)).size() == 2);
  CHECK(bridges(gen::cycle(4)).empty());
  CHECK(bridges(gen::triangle_with_pendant()) == std::vector<Arc>{{2, 3}});
  CHECK_THROWS_AS(bridges(Graph::from_edge_list(2, true, {{0, 1}})), Error);
}

TEST_CASE("bridges match removal oracle on all graphs up to 6 vertices") {
  for (int n = 1; n <= 6; ++n) {
    const unsigned masks = 1u << (n * (n - 1) / 2);
    for (unsigned m = 0; m < masks; ++m) {
      const auto g = from_mask(n, m);
      REQUIRE(bridges(g) == oracle_bridges(g));
    }
  }
}

TEST_CASE("bridges match removal oracle on random graphs up to 8 vertices") {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto g = gen::gnp(7 + static_cast<int>(s % 2), 0.25 + 0.05 * (s % 6), s);
    REQUIRE(bridges(g) == oracle_bridges(g));
  }
}

TEST_CASE("block cut-edge tree") {
  const auto c4 = block_cut_edge_tree(gen::cycle(4));
  CHECK(c4.components.size() == 1);
  CHECK(c4.tree_edges.empty());
  const auto p4 = block_cut_edge_tree(gen::path(4));
  CHECK(p4.components.size() == 4);
  CHECK(p4.tree_edges.size() == 3);
  const auto tp = block_cut_edge_tree(gen::triangle_with_pendant());
  REQUIRE(tp.components.size() == 2);
  CHECK(tp.components[0] == std::vector<int>{0, 1, 2});
  CHECK(tp.components[1] == std::vector<int>{3});
  CHECK(tp.tree_edges.size() == 1);
  CHECK_THROWS_AS(block_cut_edge_tree(gen::disjoint_union(gen::path(2), gen::path(2))), Error);
}

TEST_CASE("block cut-edge tree component count is bridge count plus one") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto g = gen::gnp(9, 0.3, s);
    if (!g.connected()) continue;
    const auto t = block_cut_edge_tree(g);
    CHECK(t.components.size() == bridges(g).size() + 1);
    std::vector<int> seen(g.n(), 0);
    for (const auto& c : t.components)
      for (int v : c) ++seen[v];
    for (int x : seen) CHECK(x == 1);
  }
}

TEST_CASE("tree isomorphism") {
  BlockCutEdgeTree single{{{0}}, {}};
  CHECK(tree_isomorphic(single, single));
  const BlockCutEdgeTree path3{{{0}, {1}, {2}}, {{0, 1}, {1, 2}}};
  const BlockCutEdgeTree star4{{{0}, {1}, {2}, {3}}, {{0, 1}, {0, 2}, {0, 3}}};
  CHECK(!tree_isomorphic(path3, star4));
  const auto p4 = block_cut_edge_tree(gen::path(4));
  const auto s3 = block_cut_edge_tree(gen::star(3));
  CHECK(!tree_isomorphic(p4, s3));
  CHECK(tree_canonical_form(4, p4.tree_edges) != tree_canonical_form(4, s3.tree_edges));
  const BlockCutEdgeTree relabeled{{{0}, {1}, {2}, {3}}, {{2, 0}, {0, 3}, {3, 1}}};
  CHECK(tree_isomorphic(p4, relabeled));
  const BlockCutEdgeTree cyclic{{{0}, {1}, {2}}, {{0, 1}, {1, 2}, {2, 0}}};
  CHECK_THROWS_AS(tree_isomorphic(cyclic, cyclic), Error);
  const BlockCutEdgeTree forest{{{0}, {1}, {2}, {3}}, {{0, 1}, {2, 3}, {2, 3}}};
  CHECK_THROWS_AS(tree_isomorphic(forest, single), Error);
}

TEST_CASE("edge list round trip and errors") {
  DenseMatrix x(3, 2);
  x(0, 0) = 0.1;
  x(2, 1) = -3.25;
  FeaturedGraph g(gen::path(3), x);
  std::stringstream s;
  write_edge_list(s, g);
  const auto back = read_edge_list(s);
  CHECK(back.graph == g.graph);
  CHECK(back.features == g.features);

  std::istringstream bad("3 1 0 0\n0 5\n");
  CHECK_THROWS_WITH_AS(read_edge_list(bad, "x.el"), doctest::Contains("x.el:2"), Error);
  std::istringstream loop("# comment\n2 1 0 0\n\n1 1\n");
  CHECK_THROWS_WITH_AS(read_edge_list(loop, "y.el"), doctest::Contains("y.el:4"), Error);
  std::istringstream truncated("3 2 0 0\n0 1\n");
  CHECK_THROWS_AS(read_edge_list(truncated), Error);
}

TEST_CASE("edge list reader streams several graphs") {
  std::istringstream in("2 1 0 0\n0 1\n3 0 1 1\n1\n2\n3\n");
  EdgeListReader r(in, "multi");
  FeaturedGraph g;
  REQUIRE(r.next(g));
  CHECK(g.graph.edge_count() == 1);
  REQUIRE(r.next(g));
  CHECK(g.graph.directed());
  CHECK(g.features(2, 0) == 3);
  CHECK(!r.next(g));
}
