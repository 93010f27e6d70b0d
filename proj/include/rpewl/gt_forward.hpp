#pragma once

#include <cstdint>
#include <vector>

#include "rpewl/encodings.hpp"
#include "rpewl/graph.hpp"
#include "rpewl/matrix.hpp"

namespace rpewl::gt {

enum class ApeMode { concat, add };
enum class RpeMapKind { channel_linear, gaussian_mlp };

struct TransformerConfig {
  int layers = 2;
  int heads = 2;
  /// Model width; 0 takes it from the input.
  int d = 0;
  int d_h = 4;
  int d_r = 8;
  std::uint64_t seed = 0;
  ApeMode ape_mode = ApeMode::concat;
  RpeMapKind rpe_map_kind = RpeMapKind::channel_linear;
  int gaussian_centers = 4;
  int mlp_hidden = 8;
};

struct Head {
  DenseMatrix wq, wk, wv;  // d x d_h
};

struct Layer {
  std::vector<Head> heads;
  DenseMatrix wo;  // d_h x d
  DenseMatrix w1;  // d x d_r
  DenseMatrix w2;  // d_r x d
};

struct TransformerWeights {
  int d = 0;
  int d_h = 0;
  std::vector<Layer> layers;
};

/// Entrywise map R^k -> R. Linear: bias + w . x. Gaussian: Gaussian-kernel
/// features of every channel fed through a one-hidden-layer perceptron.
struct RpeMap {
  RpeMapKind kind = RpeMapKind::channel_linear;
  double bias = 0.0;
  std::vector<double> weights;  // linear: k entries
  std::vector<double> centers;  // gaussian: shared across channels
  double width = 1.0;
  DenseMatrix hidden;  // (k * centers) x mlp_hidden
  std::vector<double> hidden_bias;
  std::vector<double> out;

  double operator()(const double* x, int k) const;
  /// Constant map.
  static RpeMap constant(double c);
};

/// f1 (gate after softmax) and f2 (bias inside softmax) per layer and head.
struct RpeAttentionMaps {
  std::vector<std::vector<RpeMap>> f1, f2;

  /// f1 = 1, f2 = 0 everywhere.
  static RpeAttentionMaps neutral(int layers, int heads);
};

/// Uniform(-1/sqrt(d), 1/sqrt(d)) weights from a seeded mt19937_64.
TransformerWeights random_weights(const TransformerConfig& cfg, int d);
TransformerWeights zero_weights(const TransformerConfig& cfg, int d);
RpeAttentionMaps random_maps(const TransformerConfig& cfg, int k);

/// Receives every softmax row sum before gating.
using RowSumSink = std::vector<double>;

/// Plain transformer stack; with `psi` and `maps` the attention is modified
/// entrywise by f1 and f2.
DenseMatrix forward(const DenseMatrix& x, const TransformerWeights& w, const RpeTensor* psi = nullptr,
                    const RpeAttentionMaps* maps = nullptr, RowSumSink* row_sums = nullptr);

/// Node features (unfeatured graphs give a column of 1s) combined with φ.
DenseMatrix ape_input(const FeaturedGraph& g, const ApeMatrix& phi, ApeMode mode);
DenseMatrix feature_input(const FeaturedGraph& g);

DenseMatrix forward_ape_gt(const FeaturedGraph& g, const ApeMatrix& phi, const TransformerConfig& cfg);
DenseMatrix forward_rpe_gt(const FeaturedGraph& g, const RpeTensor& psi, const RpeAttentionMaps& maps,
                           const TransformerConfig& cfg);

/// One fixed random vector per (column, token), summed over columns.
DenseMatrix embed_tokens(const ApeMatrix& phi, int dim, std::uint64_t seed);

/// Rows in lexicographic order.
DenseMatrix sorted_rows(const DenseMatrix& m);
/// max |a - b| after sorting rows of both; infinity on shape mismatch.
double sorted_row_distance(const DenseMatrix& a, const DenseMatrix& b);

double gelu(double x);

}  // namespace rpewl::gt
