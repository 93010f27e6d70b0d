#include <cmath>
#include <random>

#include "doctest.h"
#include "rpewl/error.hpp"
#include "rpewl/generators.hpp"
#include "rpewl/spectral.hpp"

using namespace rpewl;
using namespace rpewl::spectral;

namespace {

DenseMatrix lap(const Graph& g) {
  DenseMatrix l = g.adjacency().scaled(-1.0);
  for (int v = 0; v < g.n(); ++v) l(v, v) = g.degree(v);
  return l;
}

DenseMatrix random_symmetric(int n, std::uint64_t seed, int rank = -1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  if (rank < 0) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
    return m;
  }
  // Sum of `rank` symmetric rank-one terms, so the null space is nontrivial.
  DenseMatrix m(n, n);
  for (int r = 0; r < rank; ++r) {
    std::vector<double> x(n);
    for (double& v : x) v = u(rng);
    const double w = u(rng) > 0 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) += w * x[i] * x[j];
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i);
  return m;
}

void check_decomposition(const DenseMatrix& m) {
  const auto eig = sym_eigen(m);
  const std::size_t n = m.rows();
  const double tol = 1e-9 * std::max(1.0, m.norm_inf());
  for (std::size_t i = 0; i + 1 < n; ++i) CHECK(eig.eigenvalues[i] <= eig.eigenvalues[i + 1]);
  for (std::size_t i = 0; i < n; ++i) {
    double resid = 0;
    for (std::size_t r = 0; r < n; ++r) {
      double mz = 0;
      for (std::size_t c = 0; c < n; ++c) mz += m(r, c) * eig.eigenvectors(c, i);
      resid = std::max(resid, std::abs(mz - eig.eigenvalues[i] * eig.eigenvectors(r, i)));
    }
    CHECK(resid <= tol);
  }
  const auto gram = eig.eigenvectors.transpose() * eig.eigenvectors;
  CHECK(max_abs_diff(gram, DenseMatrix::identity(n)) <= 1e-9);
}

}  // namespace

TEST_CASE("eigenvalues of small Laplacians") {
  const auto k2 = sym_eigen(lap(gen::path(2)));
  CHECK(k2.eigenvalues[0] == doctest::Approx(0.0));
  CHECK(k2.eigenvalues[1] == doctest::Approx(2.0));
  const auto c3 = sym_eigen(lap(gen::cycle(3)));
  CHECK(std::abs(c3.eigenvalues[0]) < 1e-12);
  CHECK(c3.eigenvalues[1] == doctest::Approx(3.0));
  CHECK(c3.eigenvalues[2] == doctest::Approx(3.0));
  const auto z = sym_eigen(DenseMatrix(3, 3));
  for (double x : z.eigenvalues) CHECK(x == 0.0);
  check_decomposition(DenseMatrix(3, 3));
}

TEST_CASE("cycle spectra match the circulant formula") {
  for (int n = 3; n <= 12; ++n) {
    const auto eig = sym_eigen(lap(gen::cycle(n)));
    std::vector<double> expected;
    for (int k = 0; k < n; ++k) expected.push_back(2.0 - 2.0 * std::cos(2.0 * M_PI * k / n));
    std::sort(expected.begin(), expected.end());
    for (int k = 0; k < n; ++k) CHECK(eig.eigenvalues[k] == doctest::Approx(expected[k]).epsilon(1e-12));
  }
}

TEST_CASE("decomposition invariants") {
  for (std::uint64_t s = 0; s < 20; ++s) check_decomposition(random_symmetric(3 + static_cast<int>(s % 18), s));
  check_decomposition(lap(gen::csl(41, 3)));
  check_decomposition(lap(gen::shrikhande()));
}

TEST_CASE("asymmetric input is rejected") {
  DenseMatrix m{{0, 1}, {0, 0}};
  CHECK_THROWS_AS(sym_eigen(m), Error);
  CHECK_THROWS_AS(sym_eigen(DenseMatrix(2, 3)), Error);
}

TEST_CASE("pseudoinverse") {
  const auto p = pseudoinverse(lap(gen::path(2)));
  const DenseMatrix expected{{0.25, -0.25}, {-0.25, 0.25}};
  CHECK(max_abs_diff(p, expected) < 1e-12);
  const auto l = lap(gen::path(2));
  CHECK(max_abs_diff(l * p * l, l) < 1e-12);
  CHECK(max_abs_diff(pseudoinverse(DenseMatrix(3, 3)), DenseMatrix(3, 3)) == 0.0);
  CHECK(max_abs_diff(pseudoinverse(DenseMatrix::identity(4)), DenseMatrix::identity(4)) < 1e-12);
}

TEST_CASE("Moore-Penrose identities on random symmetric matrices") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const int n = 2 + static_cast<int>(s % 19);
    const auto m = random_symmetric(n, 1000 + s, s % 2 ? n / 2 : -1);
    const auto p = pseudoinverse(m);
    CHECK(max_abs_diff(m * p * m, m) < 1e-8);
    CHECK(max_abs_diff(p * m * p, p) < 1e-8);
    const auto mp = m * p, pm = p * m;
    CHECK(max_abs_diff(mp, mp.transpose()) < 1e-8);
    CHECK(max_abs_diff(pm, pm.transpose()) < 1e-8);
  }
}

TEST_CASE("power stack") {
  const auto a = gen::path(3).adjacency();
  CHECK(power_stack(a, 0).size() == 1);
  CHECK(power_stack(a, 0)[0] == DenseMatrix::identity(3));
  CHECK(power_stack(a, 2)[2](0, 2) == 1.0);
  const auto c3 = power_stack(gen::cycle(3).adjacency(), 2)[2];
  for (int v = 0; v < 3; ++v) CHECK(c3(v, v) == 2.0);
  CHECK(power_stack_exact(a, 3) == power_stack(a, 3));
  CHECK_THROWS_AS(power_stack_exact(DenseMatrix{{0.5}}, 1), Error);
  CHECK_THROWS_AS(power_stack_exact(lap(gen::complete(10)), 40), Error);
}

TEST_CASE("exact power stack codes large entries injectively") {
  // L(K10)^k = 10^(k-1) L: diagonal 9 * 10^(k-1), off-diagonal -10^(k-1).
  const auto st = power_stack_exact(lap(gen::complete(10)), 20);
  for (int k = 1; k <= 20; ++k) {
    const auto& p = st[k];
    const double big = 0x1.0p53;
    const bool diag_exact = 9.0 * std::pow(10.0, k - 1) <= big;
    if (diag_exact) CHECK(p(0, 0) == 9.0 * std::pow(10.0, k - 1));
    else CHECK(p(0, 0) >= big);
    CHECK(p(0, 1) < 0);
    for (int u = 0; u < 10; ++u)
      for (int v = 0; v < 10; ++v) CHECK(p(u, v) == (u == v ? p(0, 0) : p(0, 1)));
    for (int j = 1; j < k; ++j) CHECK(st[j](0, 0) != p(0, 0));
  }
  const auto again = power_stack_exact(lap(gen::complete(10)), 20);
  CHECK(again == st);
}

TEST_CASE("power stack counts walks") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const int n = 2 + static_cast<int>(s % 5);
    const auto g = gen::gnp(n, 0.5, s);
    const auto stack = power_stack(g.adjacency(), 5);
    // Walk counts by direct recursion over walk endpoints.
    std::vector<std::vector<double>> walks(n, std::vector<double>(n, 0.0));
    for (int v = 0; v < n; ++v) walks[v][v] = 1;
    for (int k = 1; k <= 5; ++k) {
      std::vector<std::vector<double>> next(n, std::vector<double>(n, 0.0));
      for (int u = 0; u < n; ++u)
        for (int w = 0; w < n; ++w)
          for (int x : g.out_neighbors(w)) next[u][x] += walks[u][w];
      walks = next;
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) CHECK(stack[k](u, v) == walks[u][v]);
    }
  }
}

TEST_CASE("spectral_apply") {
  const auto l = lap(gen::path(2));
  CHECK(max_abs_diff(spectral_apply(l, functions::identity(), true), l) < 1e-12);
  CHECK(max_abs_diff(spectral_apply(l, functions::inverse(), true), pseudoinverse(l)) < 1e-15);
  const auto h = spectral_apply(l, functions::exp_neg(1.0), true);
  const double e2 = std::exp(-2.0) / 2.0;
  CHECK(h(0, 0) == doctest::Approx(e2).epsilon(1e-12));
  CHECK(h(0, 0) == doctest::Approx(0.067668).epsilon(1e-5));
  CHECK(h(0, 1) == doctest::Approx(-e2).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(spectral_apply(l, functions::inverse(), false), doctest::Contains("eigenvalue 0"), Error);
  CHECK(max_abs_diff(spectral_apply(l, functions::inverse_or_zero(), false), pseudoinverse(l)) < 1e-15);
}

TEST_CASE("identity reconstruction without skipping zero") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto m = lap(gen::gnp(10, 0.3, s));
    CHECK(max_abs_diff(spectral_apply(m, functions::identity(), false), m) < 1e-9);
  }
}

TEST_CASE("spectral_apply is basis independent on degenerate eigenspaces") {
  // Rotate an orthonormal basis of C4's repeated eigenspace and rebuild.
  const auto l = lap(gen::cycle(4));
  auto eig = sym_eigen(l);
  std::size_t i = 0;
  while (std::abs(eig.eigenvalues[i] - 2.0) > 1e-9) ++i;
  REQUIRE(std::abs(eig.eigenvalues[i + 1] - 2.0) < 1e-9);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 10; ++trial) {
    const double t = u(rng);
    auto rotated = eig;
    for (int r = 0; r < 4; ++r) {
      const double a = eig.eigenvectors(r, i), b = eig.eigenvectors(r, i + 1);
      rotated.eigenvectors(r, i) = std::cos(t) * a - std::sin(t) * b;
      rotated.eigenvectors(r, i + 1) = std::sin(t) * a + std::cos(t) * b;
    }
    for (const auto& f : {functions::inverse(), functions::exp_neg(1.0), functions::square()})
      CHECK(max_abs_diff(spectral_apply(eig, f, true), spectral_apply(rotated, f, true)) < 1e-8);
  }
  // A perturbed copy decomposes to a different basis but the same kernel.
  DenseMatrix p = l;
  p(0, 0) += 1e-14;
  p(2, 2) -= 1e-14;
  CHECK(max_abs_diff(spectral_apply(p, functions::inverse(), true), spectral_apply(l, functions::inverse(), true)) <
        1e-8);
}

TEST_CASE("function names") {
  CHECK(functions::by_name("inv").name == "inv");
  CHECK(functions::by_name("exp").name == "exp");
  CHECK(functions::by_name("exp2")(1.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(functions::by_name("exp:0.5")(2.0) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(functions::by_name("cosh"), Error);
  CHECK_THROWS_AS(functions::by_name("exp:x"), Error);
}

TEST_CASE("hermitian eigen") {
  // H = [[1, i], [-i, 1]] has eigenvalues 0 and 2.
  HermitianMatrix h{DenseMatrix{{1, 0}, {0, 1}}, DenseMatrix{{0, 1}, {-1, 0}}};
  const auto e = hermitian_eigen(h);
  REQUIRE(e.eigenvalues.size() == 2);
  CHECK(std::abs(e.eigenvalues[0]) < 1e-12);
  CHECK(e.eigenvalues[1] == doctest::Approx(2.0));
  // H v = λ v in complex arithmetic.
  for (int i = 0; i < 2; ++i)
    for (int r = 0; r < 2; ++r) {
      double re = 0, im = 0;
      for (int c = 0; c < 2; ++c) {
        re += h.re(r, c) * e.vectors_re(c, i) - h.im(r, c) * e.vectors_im(c, i);
        im += h.re(r, c) * e.vectors_im(c, i) + h.im(r, c) * e.vectors_re(c, i);
      }
      CHECK(re == doctest::Approx(e.eigenvalues[i] * e.vectors_re(r, i)));
      CHECK(im == doctest::Approx(e.eigenvalues[i] * e.vectors_im(r, i)));
    }
  HermitianMatrix bad{DenseMatrix{{1, 0}, {0, 1}}, DenseMatrix{{0, 1}, {1, 0}}};
  CHECK_THROWS_AS(hermitian_eigen(bad), Error);
}
