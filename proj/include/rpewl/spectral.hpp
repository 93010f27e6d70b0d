#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rpewl/matrix.hpp"

namespace rpewl::spectral {

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kRelativeZeroThreshold = 1e-8;

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix eigenvectors;         // column i pairs with eigenvalues[i]
  double zero_threshold = 0.0;      // |lambda| <= threshold counts as zero

  bool is_zero(double lambda) const noexcept { return lambda <= zero_threshold && lambda >= -zero_threshold; }
};

/// Cyclic Jacobi eigendecomposition of a real symmetric matrix.
EigenDecomposition sym_eigen(const DenseMatrix& m);

// Complex Hermitian matrix stored as separate real and imaginary parts.
struct HermitianMatrix {
  DenseMatrix re;
  DenseMatrix im;

  std::size_t n() const noexcept { return re.rows(); }
  void validate(double tol = kSymmetryTolerance) const;
};

struct HermitianEigenDecomposition {
  std::vector<double> eigenvalues;  // ascending, real
  DenseMatrix vectors_re;           // column i: real part of eigenvector i
  DenseMatrix vectors_im;
};

/// Eigenpairs of H through its real symmetric embedding [[Re, -Im], [Im, Re]],
/// whose spectrum is that of H with every eigenvalue doubled.
HermitianEigenDecomposition hermitian_eigen(const HermitianMatrix& h);

/// Moore–Penrose pseudoinverse of a symmetric matrix.
DenseMatrix pseudoinverse(const DenseMatrix& m);

/// [I, M, M^2, ..., M^k_max] by repeated multiplication.
std::vector<DenseMatrix> power_stack(const DenseMatrix& m, int k_max);
/// Same, computed in exact 128-bit integer arithmetic. Requires integral
/// entries. Entries beyond 2^53 are stored as an injective hash code, so
/// equal doubles mean equal integers; throws on 128-bit overflow.
std::vector<DenseMatrix> power_stack_exact(const DenseMatrix& m, int k_max);

// Named scalar function applied to eigenvalues.
struct ScalarFunction {
  std::string name;
  std::function<double(double)> f;

  double operator()(double x) const { return f(x); }
};

/// Σ f(λ_i) z_i z_iᵀ. With skip_zero, eigenvalues within the zero threshold
/// are left out; without it they are snapped to exactly 0 before f is applied.
DenseMatrix spectral_apply(const DenseMatrix& m, const ScalarFunction& f, bool skip_zero);
DenseMatrix spectral_apply(const EigenDecomposition& eig, const ScalarFunction& f, bool skip_zero);

namespace functions {
ScalarFunction identity();
ScalarFunction one();
ScalarFunction inverse();            // 1/x
ScalarFunction inverse_or_zero();    // 1/x, 0 at x = 0
ScalarFunction exp_neg(double t);    // e^{-t x}
ScalarFunction square();             // x^2
/// Parses "id", "one", "inv", "inv0", "exp", "exp2", "exp:<t>", "sq".
ScalarFunction by_name(const std::string& name);
}  // namespace functions

}  // namespace rpewl::spectral
