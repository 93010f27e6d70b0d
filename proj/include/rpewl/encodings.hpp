#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rpewl/graph.hpp"
#include "rpewl/matrix.hpp"
#include "rpewl/spectral.hpp"

namespace rpewl {

inline constexpr double kSpectralQuantStep = 1e-9;
inline constexpr double kExactQuantStep = 1.0;

using Token = std::int64_t;

/// round(value / step) with signed zero folded onto 0. Throws when the
/// quotient leaves the int64 range.
Token tokenize(double value, double step);

// n x n x k relative encoding. Entry (u, v, c) lives at ((u * n) + v) * k + c.
struct RpeTensor {
  int n = 0;
  int k = 0;
  std::vector<double> values;
  std::string name;
  double quant_step = kSpectralQuantStep;
  /// Diagonal values never coincide with off-diagonal ones, for any graph.
  bool diagonally_aware = false;

  RpeTensor() = default;
  RpeTensor(int n, int k, std::string name, double quant_step);
  static RpeTensor from_channels(const std::vector<DenseMatrix>& channels, std::string name, double quant_step);

  double& at(int u, int v, int c) { return values[(static_cast<std::size_t>(u) * n + v) * k + c]; }
  double at(int u, int v, int c) const { return values[(static_cast<std::size_t>(u) * n + v) * k + c]; }
  DenseMatrix channel(int c) const;
  /// Permutes both node axes: out(p(u), p(v)) = this(u, v).
  RpeTensor permuted(const Permutation& p) const;
  /// Appends all-zero channels up to `channels`.
  RpeTensor padded(int channels) const;
};

// n x l absolute encoding.
struct ApeMatrix {
  int n = 0;
  int l = 0;
  std::vector<double> values;
  std::string name;
  double quant_step = kSpectralQuantStep;

  ApeMatrix() = default;
  ApeMatrix(int n, int l, std::string name, double quant_step);

  double& at(int v, int c) { return values[static_cast<std::size_t>(v) * l + c]; }
  double at(int v, int c) const { return values[static_cast<std::size_t>(v) * l + c]; }
  ApeMatrix permuted(const Permutation& p) const;
};

struct TokenTensor {
  int n = 0;
  int k = 0;
  std::vector<Token> tokens;  // same layout as RpeTensor::values

  const Token* entry(int u, int v) const { return tokens.data() + (static_cast<std::size_t>(u) * n + v) * k; }
};

struct TokenMatrix {
  int n = 0;
  int l = 0;
  std::vector<Token> tokens;

  const Token* row(int v) const { return tokens.data() + static_cast<std::size_t>(v) * l; }
};

TokenTensor tokenize(const RpeTensor& psi);
TokenMatrix tokenize(const ApeMatrix& phi);
/// Feature rows tokenized at `step`; unfeatured graphs give one column of 1s.
TokenMatrix tokenize_features(const FeaturedGraph& g, double step = kSpectralQuantStep);

namespace encodings {

enum class MatrixKind { adjacency, sym_norm_adjacency, rw_norm_adjacency, laplacian, sym_norm_laplacian, rw_norm_laplacian };
enum class SpectralForm { kernel, distance };
/// Operator whose nonzero eigenpairs define a spectral kernel.
enum class KernelBase { laplacian, sym_norm_laplacian };
enum class PowerBase { laplacian, sym_norm_adjacency, adjacency, heat };
enum class HeatChannelZero { nonzero_reconstruction, identity };
enum class AugmentKind { diagonal, combinatorial, pseudosymmetric };

/// Degree-0 rows of the normalized matrices are zero rows.
DenseMatrix graph_matrix(const Graph& g, MatrixKind kind);
std::string to_string(MatrixKind kind);
MatrixKind matrix_kind_from_string(const std::string& s);

RpeTensor rpe_matrix(const Graph& g, MatrixKind kind);
/// BFS distances; pairs in different components get the sentinel n.
RpeTensor rpe_spd(const Graph& g);
/// (1_u - 1_v)ᵀ L† (1_u - 1_v); cross-component pairs get the sentinel n.
RpeTensor rpe_resistance(const Graph& g);
/// Laplacian pseudoinverse as a single-channel RPE.
RpeTensor rpe_pinv(const Graph& g);
RpeTensor rpe_spectral(const Graph& g, const spectral::ScalarFunction& f, SpectralForm form,
                       KernelBase base = KernelBase::laplacian);
RpeTensor rpe_heat_kernel(const Graph& g, const std::vector<double>& times);
RpeTensor rpe_power_stack(const Graph& g, PowerBase base, int k_max,
                          HeatChannelZero zero = HeatChannelZero::nonzero_reconstruction);
/// Channels (Re, Im) of D* - T^α ⊙ A*.
RpeTensor rpe_magnetic_laplacian(const Graph& g, double alpha);
/// Channels (D*, A, Aᵀ).
RpeTensor rpe_directed_stack(const Graph& g);
/// V f(Λ) Vᵀ over the full spectrum of L, zero eigenspace included.
RpeTensor rpe_rspe(const Graph& g, const spectral::ScalarFunction& f);
/// One projector per eigenvalue group, ascending; zero channels up to `pad_to`.
RpeTensor rpe_eigenprojections(const Graph& g, double group_tol = 1e-6, int pad_to = 0);
int eigenvalue_group_count(const Graph& g, double group_tol = 1e-6);

RpeTensor augment(const RpeTensor& psi, AugmentKind kind, const Graph& g);

enum class ApeKind { degree, rwse, hkdiagse };
ApeMatrix ape_compute(const Graph& g, ApeKind kind, const std::vector<double>& times = {});

}  // namespace encodings

}  // namespace rpewl
