#include <cmath>
#include <set>

#include "doctest.h"
#include "rpewl/encodings.hpp"
#include "rpewl/error.hpp"
#include "rpewl/generators.hpp"
#include "rpewl/structure.hpp"

using namespace rpewl;
using namespace rpewl::encodings;
namespace fn = rpewl::spectral::functions;

namespace {

double det(std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  double d = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return d;
}

// Laplacian with the listed vertices deleted.
std::vector<std::vector<double>> reduced_laplacian(const Graph& g, std::set<int> drop) {
  std::vector<std::vector<double>> m;
  for (int u = 0; u < g.n(); ++u) {
    if (drop.count(u)) continue;
    std::vector<double> row;
    for (int v = 0; v < g.n(); ++v) {
      if (drop.count(v)) continue;
      row.push_back(u == v ? g.degree(u) : (g.has_arc(u, v) ? -1.0 : 0.0));
    }
    m.push_back(row);
  }
  return m;
}

// Kirchhoff: RD(u,v) = det L[-u,-v] / det L[-u] on a connected graph.
double oracle_resistance(const Graph& g, int u, int v) {
  if (u == v) return 0.0;
  return det(reduced_laplacian(g, {u, v})) / det(reduced_laplacian(g, {u}));
}

Graph random_connected(int n, std::uint64_t seed) {
  for (std::uint64_t s = seed;; s += 7919) {
    auto g = gen::gnp(n, 0.35, s);
    if (g.connected()) return g;
  }
}

double max_diff(const RpeTensor& a, const RpeTensor& b) {
  REQUIRE(a.values.size() == b.values.size());
  double m = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

double max_diff(const ApeMatrix& a, const ApeMatrix& b) {
  REQUIRE(a.values.size() == b.values.size());
  double m = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize(0.7500000001, 1e-9) == 750000000);
  CHECK(tokenize(-0.0, 1e-9) == 0);
  CHECK(tokenize(0.0, 1e-9) == 0);
  CHECK(tokenize(-1e-12, 1e-9) == 0);
  CHECK(tokenize(1.0, 1e-9) != tokenize(1.0 + 1e-9, 1e-9));
  CHECK(tokenize(3.0, 1.0) == 3);
  CHECK_THROWS_AS(tokenize(1e300, 1e-9), Error);
  CHECK_THROWS_AS(tokenize(1.0, 0.0), Error);
  CHECK_THROWS_AS(tokenize(std::nan(""), 1.0), Error);
}

TEST_CASE("graph matrices") {
  const auto c3 = rpe_matrix(gen::cycle(3), MatrixKind::laplacian);
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) CHECK(c3.at(u, v, 0) == (u == v ? 2.0 : -1.0));
  const auto k2 = graph_matrix(gen::path(2), MatrixKind::sym_norm_adjacency);
  CHECK(k2 == DenseMatrix{{0, 1}, {1, 0}});
  const auto s3 = graph_matrix(gen::star(3), MatrixKind::rw_norm_adjacency);
  for (int v = 1; v <= 3; ++v) CHECK(s3(0, v) == doctest::Approx(1.0 / 3.0));
  CHECK(s3(1, 0) == 1.0);
  // Isolated vertex: zero rows in every normalized matrix.
  const auto iso = Graph::from_edge_list(3, false, {{0, 1}});
  for (auto kind : {MatrixKind::sym_norm_adjacency, MatrixKind::rw_norm_adjacency, MatrixKind::sym_norm_laplacian,
                    MatrixKind::rw_norm_laplacian}) {
    const auto m = graph_matrix(iso, kind);
    for (int v = 0; v < 3; ++v) CHECK(m(2, v) == 0.0);
  }
  CHECK(graph_matrix(iso, MatrixKind::sym_norm_laplacian)(0, 0) == 1.0);
  CHECK_THROWS_AS(graph_matrix(Graph::from_edge_list(2, true, {{0, 1}}), MatrixKind::laplacian), Error);
  CHECK(matrix_kind_from_string("rw_norm_laplacian") == MatrixKind::rw_norm_laplacian);
  CHECK_THROWS_AS(matrix_kind_from_string("nope"), Error);
}

TEST_CASE("shortest path distances") {
  CHECK(rpe_spd(gen::cycle(5)).at(0, 2, 0) == 2);
  CHECK(rpe_spd(gen::path(4)).at(0, 3, 0) == 3);
  const auto two = gen::disjoint_union(gen::cycle(3), gen::cycle(3));
  CHECK(rpe_spd(two).at(0, 4, 0) == 6);
  CHECK(rpe_spd(two).at(0, 1, 0) == 1);
  CHECK(rpe_spd(two).diagonally_aware);
}

TEST_CASE("resistance distance examples") {
  CHECK(rpe_resistance(gen::path(2)).at(0, 1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rpe_resistance(gen::cycle(4)).at(0, 1, 0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rpe_resistance(gen::path(3)).at(0, 2, 0) == doctest::Approx(2.0).epsilon(1e-12));
  const auto two = gen::disjoint_union(gen::path(2), gen::cycle(3));
  const auto rd = rpe_resistance(two);
  CHECK(rd.at(0, 3, 0) == 5.0);
  CHECK(rd.at(2, 3, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(rd.at(0, 1, 0) == doctest::Approx(1.0));
}

TEST_CASE("resistance matches the Kirchhoff oracle") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto g = random_connected(3 + static_cast<int>(s % 10), s);
    const auto rd = rpe_resistance(g);
    for (int u = 0; u < g.n(); ++u)
      for (int v = 0; v < g.n(); ++v) CHECK(std::abs(rd.at(u, v, 0) - oracle_resistance(g, u, v)) < 1e-9);
  }
}

TEST_CASE("resistance is the squared inverse spectral distance") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto g = random_connected(2 + static_cast<int>(s % 11), s + 50);
    const auto rd = rpe_resistance(g);
    const auto d = rpe_spectral(g, fn::inverse(), SpectralForm::distance);
    for (int u = 0; u < g.n(); ++u)
      for (int v = 0; v < g.n(); ++v) CHECK(std::abs(rd.at(u, v, 0) - d.at(u, v, 0) * d.at(u, v, 0)) < 1e-8);
  }
}

TEST_CASE("diagonal Gram identity recovers the pseudoinverse diagonal") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto g = random_connected(2 + static_cast<int>(s % 11), s + 300);
    const int n = g.n();
    const auto rd = rpe_resistance(g);
    const auto pinv = rpe_pinv(g);
    double total = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) total += rd.at(i, j, 0);
    for (int k = 0; k < n; ++k) {
      double row = 0;
      for (int i = 0; i < n; ++i) row += rd.at(i, k, 0);
      const double rebuilt = row / n - total / (2.0 * n * n);
      CHECK(std::abs(rebuilt - pinv.at(k, k, 0)) < 1e-8);
    }
  }
}

TEST_CASE("edge resistance is at most one and exactly one on bridges") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto g = random_connected(2 + static_cast<int>(s % 11), s + 900);
    const auto rd = rpe_resistance(g);
    const auto b = bridges(g);
    for (const auto& e : g.edges()) {
      const double r = rd.at(e.first, e.second, 0);
      CHECK(r <= 1.0 + 1e-9);
      const bool is_bridge = std::binary_search(b.begin(), b.end(), e);
      CHECK(is_bridge == (std::abs(r - 1.0) <= 1e-9));
    }
  }
}

TEST_CASE("spectral kernels and distances") {
  const auto k = rpe_spectral(gen::path(2), fn::inverse(), SpectralForm::kernel);
  CHECK(k.at(0, 1, 0) == doctest::Approx(-0.25));
  const auto d = rpe_spectral(gen::path(2), fn::inverse(), SpectralForm::distance);
  CHECK(d.at(0, 1, 0) == doctest::Approx(1.0));
  for (const auto& f : {fn::inverse(), fn::exp_neg(1), fn::exp_neg(2), fn::square()}) {
    const auto dist = rpe_spectral(gen::gnp(9, 0.4, 1), f, SpectralForm::distance);
    for (int v = 0; v < 9; ++v) CHECK(dist.at(v, v, 0) == 0.0);
  }
  CHECK(k.name == "kernel:inv");
  CHECK(rpe_spectral(gen::path(2), fn::inverse(), SpectralForm::kernel, KernelBase::sym_norm_laplacian).name ==
        "nkernel:inv");
}

TEST_CASE("heat kernel") {
  const auto h = rpe_heat_kernel(gen::path(2), {1.0});
  CHECK(h.at(0, 0, 0) == doctest::Approx(std::exp(-2.0) / 2.0).epsilon(1e-12));
  CHECK(h.at(0, 0, 0) == doctest::Approx(0.0676676).epsilon(1e-6));
  const auto g = gen::gnp(8, 0.4, 3);
  const auto h12 = rpe_heat_kernel(g, {1.0, 2.0});
  const auto h2 = rpe_heat_kernel(g, {2.0});
  CHECK(h12.k == 2);
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) CHECK(h12.at(u, v, 1) == doctest::Approx(h2.at(u, v, 0)));
  const auto empty = rpe_heat_kernel(Graph::from_edge_list(4, false, {}), {1.0});
  for (double x : empty.values) CHECK(x == 0.0);
  CHECK_THROWS_AS(rpe_heat_kernel(g, {-1.0}), Error);
}

TEST_CASE("power stacks") {
  const auto c3 = rpe_power_stack(gen::cycle(3), PowerBase::laplacian, 1);
  CHECK(c3.k == 2);
  CHECK(c3.channel(0) == DenseMatrix::identity(3));
  CHECK(c3.channel(1) == graph_matrix(gen::cycle(3), MatrixKind::laplacian));
  CHECK(rpe_power_stack(gen::path(3), PowerBase::adjacency, 2).at(0, 2, 2) == 1.0);
  const auto k2 = rpe_power_stack(gen::path(2), PowerBase::sym_norm_adjacency, 2);
  CHECK(max_abs_diff(k2.channel(2), DenseMatrix::identity(2)) < 1e-15);

  const auto heat = rpe_power_stack(gen::path(2), PowerBase::heat, 2);
  const DenseMatrix projector{{0.5, -0.5}, {-0.5, 0.5}};
  CHECK(max_abs_diff(heat.channel(0), projector) < 1e-12);
  CHECK(heat.at(0, 0, 2) == doctest::Approx(std::exp(-4.0) / 2.0));
  CHECK(!heat.diagonally_aware);
  const auto heat_id = rpe_power_stack(gen::path(2), PowerBase::heat, 2, HeatChannelZero::identity);
  CHECK(heat_id.channel(0) == DenseMatrix::identity(2));
  CHECK(heat_id.diagonally_aware);
}

TEST_CASE("magnetic laplacian") {
  const auto g = Graph::from_edge_list(2, true, {{0, 1}});
  const auto m = rpe_magnetic_laplacian(g, 0.25);
  CHECK(m.at(0, 0, 0) == 0.5);
  CHECK(m.at(1, 1, 0) == 0.5);
  CHECK(std::abs(m.at(0, 1, 0)) < 1e-15);
  CHECK(m.at(0, 1, 1) == doctest::Approx(0.5));
  CHECK(m.at(1, 0, 1) == doctest::Approx(-0.5));

  const auto d = gen::gnp(8, 0.3, 4);
  std::vector<Arc> arcs;
  for (auto [u, v] : d.edges()) arcs.emplace_back((u + v) % 2 ? u : v, (u + v) % 2 ? v : u);
  const auto dg = Graph::from_edge_list(8, true, arcs);
  const auto zero = rpe_magnetic_laplacian(dg, 0.0);
  const auto sym = dg.adjacency();
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      CHECK(zero.at(u, v, 1) == 0.0);
      const double astar = 0.5 * (sym(u, v) + sym(v, u));
      if (u != v) CHECK(zero.at(u, v, 0) == doctest::Approx(-astar));
    }
  const auto both = Graph::from_edge_list(3, true, {{0, 1}, {1, 0}, {1, 2}, {2, 1}});
  const auto im = rpe_magnetic_laplacian(both, 1.0 / 3.0).channel(1);
  for (double x : im.data()) CHECK(x == 0.0);

  // Hermitian: re symmetric, im antisymmetric.
  const auto h = rpe_magnetic_laplacian(dg, 1.0 / 3.0);
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      CHECK(h.at(u, v, 0) == h.at(v, u, 0));
      CHECK(h.at(u, v, 1) == -h.at(v, u, 1));
    }
}

TEST_CASE("directed stack") {
  const auto g = Graph::from_edge_list(2, true, {{0, 1}});
  const auto s = rpe_directed_stack(g);
  CHECK(s.channel(0) == DenseMatrix{{0.5, 0}, {0, 0.5}});
  CHECK(s.channel(1) == DenseMatrix{{0, 1}, {0, 0}});
  CHECK(s.channel(2) == DenseMatrix{{0, 0}, {1, 0}});
  for (double x : rpe_directed_stack(Graph::from_edge_list(3, true, {})).values) CHECK(x == 0.0);
  const auto r = rpe_directed_stack(Graph::from_edge_list(5, true, {{0, 1}, {2, 1}, {3, 4}, {4, 0}}));
  CHECK(r.channel(2) == r.channel(1).transpose());
}

TEST_CASE("rspe") {
  const auto g = gen::gnp(9, 0.4, 11);
  CHECK(max_abs_diff(rpe_rspe(g, fn::identity()).channel(0), graph_matrix(g, MatrixKind::laplacian)) < 1e-9);
  CHECK(max_abs_diff(rpe_rspe(g, fn::one()).channel(0), DenseMatrix::identity(9)) < 1e-9);
  CHECK(max_abs_diff(rpe_rspe(g, fn::inverse_or_zero()).channel(0), rpe_pinv(g).channel(0)) < 1e-9);
  CHECK_THROWS_AS(rpe_rspe(g, fn::inverse()), Error);
}

TEST_CASE("eigenprojections") {
  const auto k2 = rpe_eigenprojections(gen::path(2));
  REQUIRE(k2.k == 2);
  CHECK(max_abs_diff(k2.channel(0), DenseMatrix{{0.5, 0.5}, {0.5, 0.5}}) < 1e-12);
  CHECK(max_abs_diff(k2.channel(1), DenseMatrix{{0.5, -0.5}, {-0.5, 0.5}}) < 1e-12);
  CHECK(rpe_eigenprojections(gen::cycle(4)).k == 3);
  CHECK(eigenvalue_group_count(gen::cycle(4)) == 3);
  const auto g = gen::gnp(10, 0.4, 2);
  const auto p = rpe_eigenprojections(g);
  DenseMatrix sum(10, 10);
  for (int c = 0; c < p.k; ++c) sum = sum + p.channel(c);
  CHECK(max_abs_diff(sum, DenseMatrix::identity(10)) < 1e-9);
  const auto padded = rpe_eigenprojections(gen::cycle(4), 1e-6, 6);
  CHECK(padded.k == 6);
  const auto last = padded.channel(5);
  for (double x : last.data()) CHECK(x == 0.0);
  CHECK_THROWS_AS(rpe_eigenprojections(gen::cycle(4), 1e-6, 2), Error);
}

TEST_CASE("augmentations") {
  const auto k2 = gen::path(2);
  const auto a = rpe_matrix(k2, MatrixKind::adjacency);
  const auto d = augment(a, AugmentKind::diagonal, k2);
  CHECK(d.k == 2);
  CHECK(d.channel(0) == DenseMatrix::identity(2));
  CHECK(d.channel(1) == a.channel(0));
  CHECK(d.diagonally_aware);
  CHECK(d.name == "diag+adjacency");

  const auto rd = rpe_resistance(gen::gnp(7, 0.5, 1));
  const auto ps = augment(rd, AugmentKind::pseudosymmetric, gen::gnp(7, 0.5, 1));
  CHECK(ps.k == 2);
  CHECK(ps.channel(1) == ps.channel(0));
  const auto dir = rpe_directed_stack(Graph::from_edge_list(3, true, {{0, 1}, {1, 2}}));
  const auto dps = augment(dir, AugmentKind::pseudosymmetric, Graph::from_edge_list(3, true, {{0, 1}, {1, 2}}));
  CHECK(dps.k == 6);
  CHECK(dps.channel(4) == dir.channel(1).transpose());

  const auto p3 = gen::path(3);
  const auto spd = rpe_spd(p3);
  const auto c = augment(spd, AugmentKind::combinatorial, p3);
  CHECK(c.channel(0) == p3.adjacency());
  // SPD determines adjacency: token classes unchanged by the extra channel.
  const auto ts = tokenize(spd), tc = tokenize(c);
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v)
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
          const bool same_s = ts.entry(u, v)[0] == ts.entry(x, y)[0];
          const bool same_c = tc.entry(u, v)[0] == tc.entry(x, y)[0] && tc.entry(u, v)[1] == tc.entry(x, y)[1];
          CHECK(same_s == same_c);
        }
  CHECK_THROWS_AS(augment(spd, AugmentKind::diagonal, gen::path(4)), Error);
}

TEST_CASE("absolute encodings") {
  const auto deg = ape_compute(gen::star(3), ApeKind::degree);
  CHECK(deg.at(0, 0) == 3);
  CHECK(deg.at(2, 0) == 1);
  const auto rw = ape_compute(gen::cycle(4), ApeKind::rwse, {1, 2});
  for (int v = 0; v < 4; ++v) {
    CHECK(rw.at(v, 0) == 0.0);
    CHECK(rw.at(v, 1) == doctest::Approx(0.5));
  }
  const auto hk = ape_compute(gen::path(2), ApeKind::hkdiagse, {1});
  CHECK(hk.at(0, 0) == doctest::Approx(std::exp(-2.0) / 2.0));
  CHECK(hk.at(1, 0) == doctest::Approx(std::exp(-2.0) / 2.0));
  CHECK_THROWS_AS(ape_compute(gen::cycle(4), ApeKind::rwse, {0.5}), Error);
  CHECK_THROWS_AS(ape_compute(gen::cycle(4), ApeKind::rwse, {}), Error);
}

TEST_CASE("encodings are permutation equivariant") {
  using Builder = std::function<RpeTensor(const Graph&)>;
  const std::vector<Builder> builders = {
      [](const Graph& g) { return rpe_matrix(g, MatrixKind::adjacency); },
      [](const Graph& g) { return rpe_matrix(g, MatrixKind::sym_norm_laplacian); },
      [](const Graph& g) { return rpe_matrix(g, MatrixKind::rw_norm_adjacency); },
      [](const Graph& g) { return rpe_spd(g); },
      [](const Graph& g) { return rpe_resistance(g); },
      [](const Graph& g) { return rpe_pinv(g); },
      [](const Graph& g) { return rpe_spectral(g, fn::exp_neg(1), SpectralForm::kernel); },
      [](const Graph& g) { return rpe_spectral(g, fn::square(), SpectralForm::distance); },
      [](const Graph& g) { return rpe_spectral(g, fn::inverse(), SpectralForm::kernel, KernelBase::sym_norm_laplacian); },
      [](const Graph& g) { return rpe_heat_kernel(g, {1, 2}); },
      [](const Graph& g) { return rpe_power_stack(g, PowerBase::laplacian, 4); },
      [](const Graph& g) { return rpe_power_stack(g, PowerBase::sym_norm_adjacency, 5); },
      [](const Graph& g) { return rpe_power_stack(g, PowerBase::heat, 3); },
      [](const Graph& g) { return rpe_rspe(g, fn::inverse_or_zero()); },
      [](const Graph& g) { return rpe_eigenprojections(g); },
      [](const Graph& g) { return augment(rpe_spd(g), AugmentKind::combinatorial, g); },
  };
  for (std::size_t b = 0; b < builders.size(); ++b)
    for (std::uint64_t s = 0; s < 50; ++s) {
      const int n = 2 + static_cast<int>(s % 9);
      const auto g = gen::gnp(n, 0.45, s * 31 + b);
      const auto p = Permutation::random(n, s + 77);
      const auto lhs = builders[b](apply_permutation(g, p));
      const auto rhs = builders[b](g).permuted(p);
      REQUIRE(lhs.k == rhs.k);
      CHECK(max_diff(lhs, rhs) < 1e-8);
    }

  for (std::uint64_t s = 0; s < 50; ++s) {
    const int n = 2 + static_cast<int>(s % 9);
    std::vector<Arc> arcs;
    for (auto [u, v] : gen::gnp(n, 0.45, s).edges()) arcs.emplace_back(s % 2 ? u : v, s % 2 ? v : u);
    for (auto [u, v] : gen::gnp(n, 0.2, s + 1).edges()) arcs.emplace_back(v, u);
    const auto g = Graph::from_edge_list(n, true, arcs);
    const auto p = Permutation::random(n, s + 5);
    CHECK(max_diff(rpe_magnetic_laplacian(apply_permutation(g, p), 0.25), rpe_magnetic_laplacian(g, 0.25).permuted(p)) <
          1e-12);
    CHECK(max_diff(rpe_directed_stack(apply_permutation(g, p)), rpe_directed_stack(g).permuted(p)) == 0.0);
  }

  for (auto kind : {ApeKind::degree, ApeKind::rwse, ApeKind::hkdiagse})
    for (std::uint64_t s = 0; s < 50; ++s) {
      const int n = 2 + static_cast<int>(s % 9);
      const auto g = gen::gnp(n, 0.45, s + 400);
      const auto p = Permutation::random(n, s);
      const std::vector<double> times = kind == ApeKind::hkdiagse ? std::vector<double>{1, 2}
                                                                  : std::vector<double>{1, 2, 3, 4};
      CHECK(max_diff(ape_compute(apply_permutation(g, p), kind, times), ape_compute(g, kind, times).permuted(p)) < 1e-8);
    }
}

TEST_CASE("undirected encodings are symmetric") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto g = gen::gnp(9, 0.4, s);
    for (const auto& t : {rpe_spd(g), rpe_resistance(g), rpe_pinv(g), rpe_heat_kernel(g, {1}),
                          rpe_matrix(g, MatrixKind::sym_norm_adjacency), rpe_eigenprojections(g),
                          rpe_spectral(g, fn::inverse(), SpectralForm::distance)})
      for (int u = 0; u < 9; ++u)
        for (int v = 0; v < 9; ++v)
          for (int c = 0; c < t.k; ++c) CHECK(t.at(u, v, c) == t.at(v, u, c));
  }
}
