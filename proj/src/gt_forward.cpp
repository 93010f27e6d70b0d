#include "rpewl/gt_forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "rpewl/error.hpp"

namespace rpewl::gt {

namespace {

// Portable uniform in [lo, hi): the 53 high bits of one mt19937_64 draw.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

DenseMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, double bound) {
  DenseMatrix m(rows, cols);
  for (double& x : m.data()) x = uniform(rng, -bound, bound);
  return m;
}

void validate(const TransformerConfig& cfg) {
  if (cfg.layers < 0 || cfg.heads < 1 || cfg.d_h < 1 || cfg.d_r < 1 || cfg.d < 0)
    throw Error("gt_forward", "layers >= 0 and heads, d_h, d_r >= 1 are required");
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double gelu(double x) {
  constexpr double c = 0.7978845608028654;  // sqrt(2 / pi)
  return 0.5 * x * (1.0 + std::tanh(c * (x + 0.044715 * x * x * x)));
}

double RpeMap::operator()(const double* x, int k) const {
  if (kind == RpeMapKind::channel_linear) {
    double s = bias;
    for (int c = 0; c < k && c < static_cast<int>(weights.size()); ++c) s += weights[c] * x[c];
    return s;
  }
  const int m = static_cast<int>(centers.size());
  std::vector<double> feat(static_cast<std::size_t>(k) * m);
  for (int c = 0; c < k; ++c)
    for (int j = 0; j < m; ++j) {
      const double z = (x[c] - centers[j]) / width;
      feat[static_cast<std::size_t>(c) * m + j] = std::exp(-0.5 * z * z);
    }
  double s = bias;
  for (std::size_t h = 0; h < hidden.cols(); ++h) {
    double a = hidden_bias[h];
    for (std::size_t i = 0; i < feat.size(); ++i) a += feat[i] * hidden(i, h);
    s += out[h] * gelu(a);
  }
  return s;
}

RpeMap RpeMap::constant(double c) {
  RpeMap m;
  m.bias = c;
  return m;
}

RpeAttentionMaps RpeAttentionMaps::neutral(int layers, int heads) {
  RpeAttentionMaps m;
  m.f1.assign(layers, std::vector<RpeMap>(heads, RpeMap::constant(1.0)));
  m.f2.assign(layers, std::vector<RpeMap>(heads, RpeMap::constant(0.0)));
  return m;
}

TransformerWeights random_weights(const TransformerConfig& cfg, int d) {
  validate(cfg);
  if (cfg.d != 0 && cfg.d != d) throw Error("gt_forward", "input width does not match the configured model width");
  std::mt19937_64 rng(cfg.seed);
  const double b = 1.0 / std::sqrt(static_cast<double>(std::max(d, 1)));
  TransformerWeights w;
  w.d = d;
  w.d_h = cfg.d_h;
  for (int l = 0; l < cfg.layers; ++l) {
    Layer layer;
    for (int h = 0; h < cfg.heads; ++h)
      layer.heads.push_back(
          {random_matrix(rng, d, cfg.d_h, b), random_matrix(rng, d, cfg.d_h, b), random_matrix(rng, d, cfg.d_h, b)});
    layer.wo = random_matrix(rng, cfg.d_h, d, b);
    layer.w1 = random_matrix(rng, d, cfg.d_r, b);
    layer.w2 = random_matrix(rng, cfg.d_r, d, b);
    w.layers.push_back(std::move(layer));
  }
  return w;
}

TransformerWeights zero_weights(const TransformerConfig& cfg, int d) {
  validate(cfg);
  TransformerWeights w;
  w.d = d;
  w.d_h = cfg.d_h;
  for (int l = 0; l < cfg.layers; ++l) {
    Layer layer;
    for (int h = 0; h < cfg.heads; ++h)
      layer.heads.push_back({DenseMatrix(d, cfg.d_h), DenseMatrix(d, cfg.d_h), DenseMatrix(d, cfg.d_h)});
    layer.wo = DenseMatrix(cfg.d_h, d);
    layer.w1 = DenseMatrix(d, cfg.d_r);
    layer.w2 = DenseMatrix(cfg.d_r, d);
    w.layers.push_back(std::move(layer));
  }
  return w;
}

RpeAttentionMaps random_maps(const TransformerConfig& cfg, int k) {
  validate(cfg);
  std::mt19937_64 rng(splitmix(cfg.seed ^ 0x6d617073ULL));
  auto make = [&]() {
    RpeMap m;
    m.kind = cfg.rpe_map_kind;
    m.bias = uniform(rng, -1, 1);
    if (m.kind == RpeMapKind::channel_linear) {
      for (int c = 0; c < k; ++c) m.weights.push_back(uniform(rng, -1, 1));
      return m;
    }
    const int centers = std::max(cfg.gaussian_centers, 1);
    for (int j = 0; j < centers; ++j) m.centers.push_back(centers == 1 ? 0.0 : 3.0 * j / (centers - 1));
    m.width = 0.75;
    m.hidden = random_matrix(rng, k * centers, std::max(cfg.mlp_hidden, 1), 1.0);
    for (std::size_t h = 0; h < m.hidden.cols(); ++h) {
      m.hidden_bias.push_back(uniform(rng, -1, 1));
      m.out.push_back(uniform(rng, -1, 1));
    }
    return m;
  };
  RpeAttentionMaps maps;
  maps.f1.resize(cfg.layers);
  maps.f2.resize(cfg.layers);
  for (int l = 0; l < cfg.layers; ++l)
    for (int h = 0; h < cfg.heads; ++h) {
      maps.f1[l].push_back(make());
      maps.f2[l].push_back(make());
    }
  return maps;
}

DenseMatrix forward(const DenseMatrix& x, const TransformerWeights& w, const RpeTensor* psi,
                    const RpeAttentionMaps* maps, RowSumSink* row_sums) {
  const int n = static_cast<int>(x.rows());
  if (static_cast<int>(x.cols()) != w.d) throw Error("gt_forward", "input width does not match the weights");
  if ((psi == nullptr) != (maps == nullptr)) throw Error("gt_forward", "RPE attention needs both ψ and its maps");
  if (psi) {
    if (psi->n != n) throw Error("gt_forward", "encoding size does not match node count");
    if (maps->f1.size() < w.layers.size() || maps->f2.size() < w.layers.size())
      throw Error("gt_forward", "attention maps do not cover every layer");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(w.d_h));
  DenseMatrix cur = x;
  std::vector<double> f1(static_cast<std::size_t>(n) * n, 1.0), f2(static_cast<std::size_t>(n) * n, 0.0);
  for (std::size_t l = 0; l < w.layers.size(); ++l) {
    const Layer& layer = w.layers[l];
    DenseMatrix heads_sum(n, w.d_h);
    for (std::size_t h = 0; h < layer.heads.size(); ++h) {
      const Head& hd = layer.heads[h];
      if (psi) {
        if (maps->f1[l].size() <= h || maps->f2[l].size() <= h)
          throw Error("gt_forward", "attention maps do not cover every head");
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v) {
            const double* p = psi->values.data() + (static_cast<std::size_t>(u) * n + v) * psi->k;
            f1[static_cast<std::size_t>(u) * n + v] = maps->f1[l][h](p, psi->k);
            const double b = maps->f2[l][h](p, psi->k);
            if (!std::isfinite(b)) throw Error("gt_forward", "attention bias is not finite");
            f2[static_cast<std::size_t>(u) * n + v] = b;
          }
      }
      const DenseMatrix q = cur * hd.wq, k = cur * hd.wk, val = cur * hd.wv;
      DenseMatrix att(n, n);
      for (int u = 0; u < n; ++u) {
        double mx = -std::numeric_limits<double>::infinity();
        for (int v = 0; v < n; ++v) {
          double s = 0;
          for (int c = 0; c < w.d_h; ++c) s += q(u, c) * k(v, c);
          att(u, v) = s * scale + f2[static_cast<std::size_t>(u) * n + v];
          mx = std::max(mx, att(u, v));
        }
        double z = 0;
        for (int v = 0; v < n; ++v) z += (att(u, v) = std::exp(att(u, v) - mx));
        double sum = 0;
        for (int v = 0; v < n; ++v) sum += (att(u, v) /= z);
        if (row_sums) row_sums->push_back(sum);
        for (int v = 0; v < n; ++v) att(u, v) *= f1[static_cast<std::size_t>(u) * n + v];
      }
      heads_sum = heads_sum + att * val;
    }
    const DenseMatrix y = cur + heads_sum * layer.wo;
    DenseMatrix hidden = y * layer.w1;
    for (double& v : hidden.data()) v = gelu(v);
    cur = y + hidden * layer.w2;
  }
  return cur;
}

DenseMatrix feature_input(const FeaturedGraph& g) {
  const int n = g.n();
  const int d = g.featured() ? static_cast<int>(g.features.cols()) : 1;
  DenseMatrix x(n, d);
  for (int v = 0; v < n; ++v) {
    const auto row = g.feature_row(v);
    for (int c = 0; c < d; ++c) x(v, c) = row[c];
  }
  return x;
}

DenseMatrix ape_input(const FeaturedGraph& g, const ApeMatrix& phi, ApeMode mode) {
  if (phi.n != g.n()) throw Error("gt_forward", "absolute encoding size does not match node count");
  const DenseMatrix x = feature_input(g);
  const int n = g.n();
  const int d = static_cast<int>(x.cols());
  if (mode == ApeMode::add) {
    if (phi.l != d) throw Error("gt_forward", "add mode needs the encoding width to equal the feature width");
    DenseMatrix out = x;
    for (int v = 0; v < n; ++v)
      for (int c = 0; c < d; ++c) out(v, c) += phi.at(v, c);
    return out;
  }
  DenseMatrix out(n, d + phi.l);
  for (int v = 0; v < n; ++v) {
    for (int c = 0; c < d; ++c) out(v, c) = x(v, c);
    for (int c = 0; c < phi.l; ++c) out(v, d + c) = phi.at(v, c);
  }
  return out;
}

DenseMatrix forward_ape_gt(const FeaturedGraph& g, const ApeMatrix& phi, const TransformerConfig& cfg) {
  const DenseMatrix x = ape_input(g, phi, cfg.ape_mode);
  return forward(x, random_weights(cfg, static_cast<int>(x.cols())));
}

DenseMatrix forward_rpe_gt(const FeaturedGraph& g, const RpeTensor& psi, const RpeAttentionMaps& maps,
                           const TransformerConfig& cfg) {
  const DenseMatrix x = feature_input(g);
  return forward(x, random_weights(cfg, static_cast<int>(x.cols())), &psi, &maps);
}

DenseMatrix embed_tokens(const ApeMatrix& phi, int dim, std::uint64_t seed) {
  if (dim < 1) throw Error("gt_forward", "embedding width must be positive");
  const auto t = tokenize(phi);
  DenseMatrix out(phi.n, dim);
  for (int v = 0; v < phi.n; ++v)
    for (int c = 0; c < t.l; ++c) {
      std::mt19937_64 rng(splitmix(splitmix(seed ^ static_cast<std::uint64_t>(c)) ^ static_cast<std::uint64_t>(t.row(v)[c])));
      for (int j = 0; j < dim; ++j) out(v, j) += uniform(rng, -1, 1);
    }
  return out;
}

DenseMatrix sorted_rows(const DenseMatrix& m) {
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) rows.emplace_back(m.row(r).begin(), m.row(r).end());
  std::sort(rows.begin(), rows.end());
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
  return out;
}

double sorted_row_distance(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  return max_abs_diff(sorted_rows(a), sorted_rows(b));
}

}  // namespace rpewl::gt
