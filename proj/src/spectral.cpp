#include "rpewl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "rpewl/color.hpp"
#include "rpewl/error.hpp"

namespace rpewl::spectral {

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition sym_eigen(const DenseMatrix& m) {
  if (!m.square()) throw Error("spectral", "eigendecomposition requires a square matrix");
  m.check_finite("spectral");
  if (!m.is_symmetric(kSymmetryTolerance * std::max(1.0, m.max_abs())))
    throw Error("spectral", "matrix is not symmetric");
  const std::size_t n = m.rows();
  DenseMatrix a = m;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));
  DenseMatrix v = DenseMatrix::identity(n);

  double frob = 0.0;
  for (double x : a.data()) frob += x * x;
  frob = std::sqrt(frob);
  const double target = std::numeric_limits<double>::epsilon() * std::max(frob, std::numeric_limits<double>::min());

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        // Skip rotations that cannot change the diagonal at working precision.
        if (std::abs(apq) < 1e-300 ||
            (sweep > 3 && std::abs(apq) * 1e18 < std::abs(app) && std::abs(apq) * 1e18 < std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_diagonal_norm(a) > 1e3 * target + 1e-14 * frob) throw Error("spectral", "Jacobi iteration did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = DenseMatrix(n, n);
  double largest = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenvalues[i] = a(order[i], order[i]);
    largest = std::max(largest, std::abs(out.eigenvalues[i]));
    for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, i) = v(k, order[i]);
  }
  out.zero_threshold = kRelativeZeroThreshold * std::max(1.0, largest);
  return out;
}

void HermitianMatrix::validate(double tol) const {
  if (!re.square() || re.rows() != im.rows() || re.cols() != im.cols())
    throw Error("spectral", "Hermitian parts must be square and of equal shape");
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = 0; j < n(); ++j)
      if (std::abs(re(i, j) - re(j, i)) > tol || std::abs(im(i, j) + im(j, i)) > tol)
        throw Error("spectral", "matrix is not Hermitian");
}

HermitianEigenDecomposition hermitian_eigen(const HermitianMatrix& h) {
  h.validate(kSymmetryTolerance * std::max({1.0, h.re.max_abs(), h.im.max_abs()}));
  const std::size_t n = h.n();
  DenseMatrix big(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      big(i, j) = h.re(i, j);
      big(i + n, j + n) = h.re(i, j);
      big(i, j + n) = -h.im(i, j);
      big(i + n, j) = h.im(i, j);
    }
  const auto eig = sym_eigen(big);

  // Each complex eigenvector appears twice in the embedding (z and i·z);
  // keep a complex-orthonormal subset of size n.
  HermitianEigenDecomposition out;
  out.vectors_re = DenseMatrix(n, n);
  out.vectors_im = DenseMatrix(n, n);
  std::vector<std::vector<double>> kept_re, kept_im;
  for (std::size_t col = 0; col < 2 * n && kept_re.size() < n; ++col) {
    std::vector<double> zr(n), zi(n);
    for (std::size_t k = 0; k < n; ++k) {
      zr[k] = eig.eigenvectors(k, col);
      zi[k] = eig.eigenvectors(k + n, col);
    }
    for (std::size_t s = 0; s < kept_re.size(); ++s) {
      // coefficient = <kept_s, z> (conjugate-linear in the first slot)
      double cr = 0.0, ci = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        cr += kept_re[s][k] * zr[k] + kept_im[s][k] * zi[k];
        ci += kept_re[s][k] * zi[k] - kept_im[s][k] * zr[k];
      }
      for (std::size_t k = 0; k < n; ++k) {
        zr[k] -= cr * kept_re[s][k] - ci * kept_im[s][k];
        zi[k] -= cr * kept_im[s][k] + ci * kept_re[s][k];
      }
    }
    double norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) norm += zr[k] * zr[k] + zi[k] * zi[k];
    norm = std::sqrt(norm);
    if (norm < 0.5) continue;
    for (std::size_t k = 0; k < n; ++k) {
      zr[k] /= norm;
      zi[k] /= norm;
    }
    const std::size_t idx = kept_re.size();
    out.eigenvalues.push_back(eig.eigenvalues[col]);
    for (std::size_t k = 0; k < n; ++k) {
      out.vectors_re(k, idx) = zr[k];
      out.vectors_im(k, idx) = zi[k];
    }
    kept_re.push_back(std::move(zr));
    kept_im.push_back(std::move(zi));
  }
  if (kept_re.size() != n) throw Error("spectral", "failed to extract a complex eigenbasis");
  return out;
}

DenseMatrix spectral_apply(const EigenDecomposition& eig, const ScalarFunction& f, bool skip_zero) {
  const std::size_t n = eig.eigenvalues.size();
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double lambda = eig.eigenvalues[i];
    if (eig.is_zero(lambda)) {
      if (skip_zero) continue;
      lambda = 0.0;
    }
    const double w = f(lambda);
    if (!std::isfinite(w)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "function '" << f.name << "' is not finite at eigenvalue " << lambda;
      throw Error("spectral", msg.str());
    }
    if (w == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const double zr = w * eig.eigenvectors(r, i);
      if (zr == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += zr * eig.eigenvectors(c, i);
    }
  }
  // Exact symmetrization removes rounding asymmetry from the outer products.
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c) out(r, c) = out(c, r) = 0.5 * (out(r, c) + out(c, r));
  return out;
}

DenseMatrix spectral_apply(const DenseMatrix& m, const ScalarFunction& f, bool skip_zero) {
  return spectral_apply(sym_eigen(m), f, skip_zero);
}

DenseMatrix pseudoinverse(const DenseMatrix& m) { return spectral_apply(m, functions::inverse(), true); }

std::vector<DenseMatrix> power_stack(const DenseMatrix& m, int k_max) {
  if (!m.square()) throw Error("spectral", "power stack requires a square matrix");
  if (k_max < 0) throw Error("spectral", "negative power");
  std::vector<DenseMatrix> out;
  out.reserve(k_max + 1);
  out.push_back(DenseMatrix::identity(m.rows()));
  for (int k = 1; k <= k_max; ++k) out.push_back(out.back() * m);
  return out;
}

__extension__ typedef __int128 wide_int;
__extension__ typedef unsigned __int128 wide_uint;

std::vector<DenseMatrix> power_stack_exact(const DenseMatrix& m, int k_max) {
  if (!m.square()) throw Error("spectral", "power stack requires a square matrix");
  if (k_max < 0) throw Error("spectral", "negative power");
  const std::size_t n = m.rows();
  constexpr long long kExactLimit = 1LL << 53;  // largest range where double holds every integer
  std::vector<wide_int> base(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    const double x = m.data()[i];
    if (x != std::round(x) || std::abs(x) > static_cast<double>(kExactLimit))
      throw Error("spectral", "exact power stack requires integral entries");
    base[i] = static_cast<long long>(x);
  }
  // Entries past 2^53 become sign * (2^53 + 2h), h a 51-bit hash of the exact
  // value: still exact doubles, disjoint from every smaller entry.
  auto encode = [](wide_int s) {
    if (s <= kExactLimit && s >= -kExactLimit) return static_cast<double>(static_cast<long long>(s));
    const auto mag = static_cast<wide_uint>(s < 0 ? -s : s);
    const auto h = ColorHasher(0x50)
                       .add(static_cast<std::int64_t>(static_cast<std::uint64_t>(mag >> 64)))
                       .add(static_cast<std::int64_t>(static_cast<std::uint64_t>(mag)))
                       .finish();
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits = (bits << 8) | h.bytes[i];
    const double code = 0x1.0p53 + 2.0 * static_cast<double>(bits >> 13);
    return s < 0 ? -code : code;
  };
  std::vector<DenseMatrix> out;
  out.push_back(DenseMatrix::identity(n));
  std::vector<wide_int> cur(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) cur[i * n + i] = 1;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<wide_int> next(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        wide_int s = 0;
        for (std::size_t l = 0; l < n; ++l) {
          wide_int t;
          if (__builtin_mul_overflow(cur[i * n + l], base[l * n + j], &t) || __builtin_add_overflow(s, t, &s))
            throw Error("spectral", "power " + std::to_string(k) + " exceeds 128-bit integer range");
        }
        next[i * n + j] = s;
      }
    cur = std::move(next);
    DenseMatrix p(n, n);
    for (std::size_t i = 0; i < n * n; ++i) p.data()[i] = encode(cur[i]);
    out.push_back(std::move(p));
  }
  return out;
}

namespace functions {

ScalarFunction identity() {
  return {"id", [](double x) { return x; }};
}
ScalarFunction one() {
  return {"one", [](double) { return 1.0; }};
}
ScalarFunction inverse() {
  return {"inv", [](double x) { return 1.0 / x; }};
}
ScalarFunction inverse_or_zero() {
  return {"inv0", [](double x) { return x == 0.0 ? 0.0 : 1.0 / x; }};
}
ScalarFunction exp_neg(double t) {
  std::ostringstream name;
  name << "exp:" << t;
  return {name.str(), [t](double x) { return std::exp(-t * x); }};
}
ScalarFunction square() {
  return {"sq", [](double x) { return x * x; }};
}

ScalarFunction by_name(const std::string& name) {
  if (name == "id") return identity();
  if (name == "one") return one();
  if (name == "inv") return inverse();
  if (name == "inv0") return inverse_or_zero();
  if (name == "exp" || name == "exp2") {
    auto f = exp_neg(name == "exp" ? 1.0 : 2.0);
    f.name = name;
    return f;
  }
  if (name == "sq") return square();
  if (name.rfind("exp:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double t = std::stod(name.substr(4), &used);
      if (used == name.size() - 4 && std::isfinite(t)) return exp_neg(t);
    } catch (const std::exception&) {
    }
  }
  throw Error("spectral", "unknown spectral function: " + name);
}

}  // namespace functions

}  // namespace rpewl::spectral
