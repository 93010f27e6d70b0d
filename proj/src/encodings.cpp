#include "rpewl/encodings.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "rpewl/error.hpp"

namespace rpewl {

namespace {

constexpr double kTokenLimit = 4611686018427387904.0;  // 2^62
constexpr double kDistanceNegativeTolerance = 1e-9;

std::string format_number(double x) {
  std::ostringstream s;
  s.precision(12);
  s << x;
  return s.str();
}

void require_undirected(const Graph& g, const char* what) {
  if (g.directed()) throw Error("encodings", std::string(what) + " requires an undirected graph");
}

}  // namespace

Token tokenize(double value, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw Error("encodings", "quant_step must be positive and finite");
  if (!std::isfinite(value)) throw Error("encodings", "cannot tokenize a non-finite value");
  const double r = std::nearbyint(value / step);
  if (std::abs(r) > kTokenLimit) throw Error("encodings", "value " + format_number(value) + " overflows the token range");
  const auto t = static_cast<Token>(r);
  return t == 0 ? 0 : t;
}

RpeTensor::RpeTensor(int n_, int k_, std::string name_, double quant_step_)
    : n(n_), k(k_), values(static_cast<std::size_t>(n_) * n_ * k_, 0.0), name(std::move(name_)), quant_step(quant_step_) {
  if (n < 0 || k < 0) throw Error("encodings", "negative tensor shape");
}

RpeTensor RpeTensor::from_channels(const std::vector<DenseMatrix>& channels, std::string name, double quant_step) {
  const int n = channels.empty() ? 0 : static_cast<int>(channels.front().rows());
  RpeTensor out(n, static_cast<int>(channels.size()), std::move(name), quant_step);
  for (int c = 0; c < out.k; ++c) {
    const auto& m = channels[c];
    if (m.rows() != static_cast<std::size_t>(n) || m.cols() != static_cast<std::size_t>(n))
      throw Error("encodings", "channel shape mismatch");
    m.check_finite("encodings");
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) out.at(u, v, c) = m(u, v);
  }
  return out;
}

DenseMatrix RpeTensor::channel(int c) const {
  if (c < 0 || c >= k) throw Error("encodings", "channel index out of range");
  DenseMatrix m(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) m(u, v) = at(u, v, c);
  return m;
}

RpeTensor RpeTensor::permuted(const Permutation& p) const {
  if (p.n() != n) throw Error("encodings", "permutation size mismatch");
  RpeTensor out = *this;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int c = 0; c < k; ++c) out.at(p(u), p(v), c) = at(u, v, c);
  return out;
}

RpeTensor RpeTensor::padded(int channels) const {
  if (channels < k) throw Error("encodings", "cannot pad to fewer channels");
  RpeTensor out(n, channels, name, quant_step);
  out.diagonally_aware = diagonally_aware;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int c = 0; c < k; ++c) out.at(u, v, c) = at(u, v, c);
  return out;
}

ApeMatrix::ApeMatrix(int n_, int l_, std::string name_, double quant_step_)
    : n(n_), l(l_), values(static_cast<std::size_t>(n_) * l_, 0.0), name(std::move(name_)), quant_step(quant_step_) {
  if (n < 0 || l < 0) throw Error("encodings", "negative matrix shape");
}

ApeMatrix ApeMatrix::permuted(const Permutation& p) const {
  if (p.n() != n) throw Error("encodings", "permutation size mismatch");
  ApeMatrix out = *this;
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < l; ++c) out.at(p(v), c) = at(v, c);
  return out;
}

TokenTensor tokenize(const RpeTensor& psi) {
  TokenTensor t{psi.n, psi.k, std::vector<Token>(psi.values.size())};
  for (std::size_t i = 0; i < psi.values.size(); ++i) t.tokens[i] = tokenize(psi.values[i], psi.quant_step);
  return t;
}

TokenMatrix tokenize(const ApeMatrix& phi) {
  TokenMatrix t{phi.n, phi.l, std::vector<Token>(phi.values.size())};
  for (std::size_t i = 0; i < phi.values.size(); ++i) t.tokens[i] = tokenize(phi.values[i], phi.quant_step);
  return t;
}

TokenMatrix tokenize_features(const FeaturedGraph& g, double step) {
  const int n = g.n();
  const int d = g.featured() ? static_cast<int>(g.features.cols()) : 1;
  TokenMatrix t{n, d, std::vector<Token>(static_cast<std::size_t>(n) * d)};
  for (int v = 0; v < n; ++v) {
    const auto row = g.feature_row(v);
    for (int c = 0; c < d; ++c) t.tokens[static_cast<std::size_t>(v) * d + c] = tokenize(row[c], step);
  }
  return t;
}

namespace encodings {

namespace {

// D^{-p} with zero entries for isolated vertices.
std::vector<double> inverse_degree_power(const Graph& g, double power) {
  std::vector<double> d(g.n(), 0.0);
  for (int v = 0; v < g.n(); ++v)
    if (g.degree(v) > 0) d[v] = std::pow(static_cast<double>(g.degree(v)), -power);
  return d;
}

DenseMatrix laplacian(const Graph& g) {
  DenseMatrix l = g.adjacency().scaled(-1.0);
  for (int v = 0; v < g.n(); ++v) l(v, v) = g.degree(v);
  return l;
}

double sentinel(const Graph& g) { return static_cast<double>(g.n()); }

std::vector<std::vector<int>> bfs_distances(const Graph& g) {
  const int n = g.n();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    dist[s][s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : g.out_neighbors(v))
        if (dist[s][w] < 0) {
          dist[s][w] = dist[s][v] + 1;
          q.push(w);
        }
    }
  }
  return dist;
}

DenseMatrix kernel_base_matrix(const Graph& g, KernelBase base) {
  return base == KernelBase::laplacian ? laplacian(g) : graph_matrix(g, MatrixKind::sym_norm_laplacian);
}

std::string kernel_base_prefix(KernelBase base) { return base == KernelBase::laplacian ? "" : "n"; }

DenseMatrix distance_from_kernel(const DenseMatrix& k) {
  const std::size_t n = k.rows();
  DenseMatrix d(n, n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      double sq = k(u, u) + k(v, v) - 2.0 * k(u, v);
      if (sq < -kDistanceNegativeTolerance)
        throw Error("encodings", "spectral distance has negative square " + format_number(sq));
      d(u, v) = std::sqrt(std::max(sq, 0.0));
    }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) d(u, v) = d(v, u) = 0.5 * (d(u, v) + d(v, u));
  return d;
}

}  // namespace

DenseMatrix graph_matrix(const Graph& g, MatrixKind kind) {
  const int n = g.n();
  if (kind == MatrixKind::adjacency) return g.adjacency();
  if (kind == MatrixKind::laplacian) {
    if (g.directed()) throw Error("encodings", "laplacian requires an undirected graph");
    return laplacian(g);
  }
  require_undirected(g, "normalized matrices");
  const DenseMatrix a = g.adjacency();
  DenseMatrix m(n, n);
  const bool sym = kind == MatrixKind::sym_norm_adjacency || kind == MatrixKind::sym_norm_laplacian;
  const auto half = inverse_degree_power(g, 0.5);
  const auto full = inverse_degree_power(g, 1.0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) m(u, v) = sym ? half[u] * a(u, v) * half[v] : full[u] * a(u, v);
  if (kind == MatrixKind::sym_norm_laplacian || kind == MatrixKind::rw_norm_laplacian) {
    // Isolated vertices keep a zero row rather than a unit diagonal.
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) m(u, v) = (u == v && g.degree(u) > 0 ? 1.0 : 0.0) - m(u, v);
  }
  return m;
}

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::adjacency: return "adjacency";
    case MatrixKind::sym_norm_adjacency: return "sym_norm_adjacency";
    case MatrixKind::rw_norm_adjacency: return "rw_norm_adjacency";
    case MatrixKind::laplacian: return "laplacian";
    case MatrixKind::sym_norm_laplacian: return "sym_norm_laplacian";
    case MatrixKind::rw_norm_laplacian: return "rw_norm_laplacian";
  }
  return "?";
}

MatrixKind matrix_kind_from_string(const std::string& s) {
  for (auto k : {MatrixKind::adjacency, MatrixKind::sym_norm_adjacency, MatrixKind::rw_norm_adjacency,
                 MatrixKind::laplacian, MatrixKind::sym_norm_laplacian, MatrixKind::rw_norm_laplacian})
    if (to_string(k) == s) return k;
  throw Error("encodings", "unknown matrix kind: " + s);
}

RpeTensor rpe_matrix(const Graph& g, MatrixKind kind) {
  const bool exact = kind == MatrixKind::adjacency || kind == MatrixKind::laplacian;
  return RpeTensor::from_channels({graph_matrix(g, kind)}, to_string(kind), exact ? kExactQuantStep : kSpectralQuantStep);
}

RpeTensor rpe_spd(const Graph& g) {
  require_undirected(g, "spd");
  const auto dist = bfs_distances(g);
  RpeTensor out(g.n(), 1, "spd", kExactQuantStep);
  for (int u = 0; u < g.n(); ++u)
    for (int v = 0; v < g.n(); ++v) out.at(u, v, 0) = dist[u][v] < 0 ? sentinel(g) : dist[u][v];
  out.diagonally_aware = true;
  return out;
}

RpeTensor rpe_resistance(const Graph& g) {
  require_undirected(g, "resistance");
  const DenseMatrix pinv = spectral::pseudoinverse(laplacian(g));
  const auto comp = g.components();
  RpeTensor out(g.n(), 1, "resistance", kSpectralQuantStep);
  for (int u = 0; u < g.n(); ++u)
    for (int v = 0; v < g.n(); ++v) {
      if (u == v) continue;
      out.at(u, v, 0) = comp[u] == comp[v] ? pinv(u, u) + pinv(v, v) - 2.0 * pinv(u, v) : sentinel(g);
    }
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v) out.at(u, v, 0) = out.at(v, u, 0) = 0.5 * (out.at(u, v, 0) + out.at(v, u, 0));
  out.diagonally_aware = true;
  return out;
}

RpeTensor rpe_pinv(const Graph& g) {
  require_undirected(g, "pinv");
  return RpeTensor::from_channels({spectral::pseudoinverse(laplacian(g))}, "pinv", kSpectralQuantStep);
}

RpeTensor rpe_spectral(const Graph& g, const spectral::ScalarFunction& f, SpectralForm form, KernelBase base) {
  require_undirected(g, "spectral kernels");
  const DenseMatrix k = spectral::spectral_apply(kernel_base_matrix(g, base), f, true);
  if (form == SpectralForm::kernel)
    return RpeTensor::from_channels({k}, kernel_base_prefix(base) + "kernel:" + f.name, kSpectralQuantStep);
  auto out = RpeTensor::from_channels({distance_from_kernel(k)}, kernel_base_prefix(base) + "distance:" + f.name,
                                      kSpectralQuantStep);
  return out;
}

RpeTensor rpe_heat_kernel(const Graph& g, const std::vector<double>& times) {
  require_undirected(g, "heat kernel");
  if (times.empty()) throw Error("encodings", "heat kernel needs at least one time");
  const auto eig = spectral::sym_eigen(laplacian(g));
  std::vector<DenseMatrix> channels;
  std::string name = "heat:";
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw Error("encodings", "heat kernel times must be positive");
    channels.push_back(spectral::spectral_apply(eig, spectral::functions::exp_neg(times[i]), true));
    name += (i ? "," : "") + format_number(times[i]);
  }
  return RpeTensor::from_channels(channels, name, kSpectralQuantStep);
}

RpeTensor rpe_power_stack(const Graph& g, PowerBase base, int k_max, HeatChannelZero zero) {
  require_undirected(g, "power stacks");
  if (k_max < 0) throw Error("encodings", "negative k_max");
  std::vector<DenseMatrix> channels;
  std::string name = "power:";
  double step = kSpectralQuantStep;
  switch (base) {
    case PowerBase::laplacian:
      channels = spectral::power_stack_exact(laplacian(g), k_max);
      name += "laplacian";
      step = kExactQuantStep;
      break;
    case PowerBase::adjacency:
      channels = spectral::power_stack_exact(g.adjacency(), k_max);
      name += "adjacency";
      step = kExactQuantStep;
      break;
    case PowerBase::sym_norm_adjacency:
      channels = spectral::power_stack(graph_matrix(g, MatrixKind::sym_norm_adjacency), k_max);
      name += "sym_norm_adjacency";
      break;
    case PowerBase::heat: {
      const auto eig = spectral::sym_eigen(laplacian(g));
      channels.push_back(zero == HeatChannelZero::identity
                             ? DenseMatrix::identity(g.n())
                             : spectral::spectral_apply(eig, spectral::functions::one(), true));
      for (int j = 1; j <= k_max; ++j)
        channels.push_back(spectral::spectral_apply(eig, spectral::functions::exp_neg(j), true));
      name += zero == HeatChannelZero::identity ? "heat_id" : "heat";
      break;
    }
  }
  name += ":" + std::to_string(k_max);
  auto out = RpeTensor::from_channels(channels, name, step);
  // Channel 0 is I for every base except the default heat stack.
  out.diagonally_aware = base != PowerBase::heat || zero == HeatChannelZero::identity;
  return out;
}

RpeTensor rpe_magnetic_laplacian(const Graph& g, double alpha) {
  if (!std::isfinite(alpha)) throw Error("encodings", "alpha must be finite");
  const int n = g.n();
  const DenseMatrix a = g.adjacency();
  RpeTensor out(n, 2, "magnetic:" + format_number(alpha), kSpectralQuantStep);
  for (int u = 0; u < n; ++u) {
    double dstar = 0.0;
    for (int v = 0; v < n; ++v) dstar += 0.5 * (a(u, v) + a(v, u));
    out.at(u, u, 0) = dstar;
    for (int v = 0; v < n; ++v) {
      const double sym = 0.5 * (a(u, v) + a(v, u));
      if (sym == 0.0) continue;
      const double diff = a(v, u) - a(u, v);
      const double sgn = diff > 0 ? 1.0 : (diff < 0 ? -1.0 : 0.0);
      const double theta = 2.0 * std::numbers::pi * alpha * sgn;
      out.at(u, v, 0) -= std::cos(theta) * sym;
      out.at(u, v, 1) = -std::sin(theta) * sym;
    }
  }
  for (double& x : out.values)
    if (x == 0.0) x = 0.0;
  return out;
}

RpeTensor rpe_directed_stack(const Graph& g) {
  const int n = g.n();
  const DenseMatrix a = g.adjacency();
  RpeTensor out(n, 3, "directed_stack", kSpectralQuantStep);
  for (int u = 0; u < n; ++u) {
    double dstar = 0.0;
    for (int v = 0; v < n; ++v) {
      dstar += 0.5 * (a(u, v) + a(v, u));
      out.at(u, v, 1) = a(u, v);
      out.at(u, v, 2) = a(v, u);
    }
    out.at(u, u, 0) = dstar;
  }
  return out;
}

RpeTensor rpe_rspe(const Graph& g, const spectral::ScalarFunction& f) {
  require_undirected(g, "rspe");
  return RpeTensor::from_channels({spectral::spectral_apply(laplacian(g), f, false)}, "rspe:" + f.name,
                                  kSpectralQuantStep);
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> eigen_groups(const spectral::EigenDecomposition& eig,
                                                              double group_tol) {
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end)
  const auto& ev = eig.eigenvalues;
  for (std::size_t i = 0; i < ev.size();) {
    std::size_t j = i + 1;
    while (j < ev.size() && ev[j] - ev[j - 1] <= group_tol) ++j;
    groups.emplace_back(i, j);
    i = j;
  }
  return groups;
}

}  // namespace

int eigenvalue_group_count(const Graph& g, double group_tol) {
  require_undirected(g, "eigenprojections");
  return static_cast<int>(eigen_groups(spectral::sym_eigen(laplacian(g)), group_tol).size());
}

RpeTensor rpe_eigenprojections(const Graph& g, double group_tol, int pad_to) {
  require_undirected(g, "eigenprojections");
  if (!(group_tol >= 0.0)) throw Error("encodings", "group_tol must be nonnegative");
  const auto eig = spectral::sym_eigen(laplacian(g));
  const auto groups = eigen_groups(eig, group_tol);
  const std::size_t n = g.n();
  std::vector<DenseMatrix> channels;
  for (const auto& [b, e] : groups) {
    DenseMatrix p(n, n);
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) p(r, c) += eig.eigenvectors(r, i) * eig.eigenvectors(c, i);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) p(r, c) = p(c, r) = 0.5 * (p(r, c) + p(c, r));
    channels.push_back(std::move(p));
  }
  if (pad_to > 0 && pad_to < static_cast<int>(channels.size()))
    throw Error("encodings", "eigenprojection padding below the group count");
  while (static_cast<int>(channels.size()) < pad_to) channels.emplace_back(n, n, 0.0);
  auto out = RpeTensor::from_channels(channels, "eigenproj", kSpectralQuantStep);
  out.n = static_cast<int>(n);
  return out;
}

RpeTensor augment(const RpeTensor& psi, AugmentKind kind, const Graph& g) {
  if (g.n() != psi.n) throw Error("encodings", "augment: graph and encoding sizes differ");
  const int n = psi.n;
  const int extra = kind == AugmentKind::pseudosymmetric ? psi.k : 1;
  const char* prefix = kind == AugmentKind::diagonal ? "diag+" : (kind == AugmentKind::combinatorial ? "comb+" : "psym+");
  RpeTensor out(n, psi.k + extra, prefix + psi.name, psi.quant_step);
  const std::size_t kk = psi.k;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (kind == AugmentKind::pseudosymmetric) {
        for (std::size_t c = 0; c < kk; ++c) {
          out.at(u, v, c) = psi.at(u, v, c);
          out.at(u, v, kk + c) = psi.at(v, u, c);
        }
        continue;
      }
      out.at(u, v, 0) = kind == AugmentKind::diagonal ? (u == v ? 1.0 : 0.0) : (g.has_arc(u, v) ? 1.0 : 0.0);
      for (std::size_t c = 0; c < kk; ++c) out.at(u, v, c + 1) = psi.at(u, v, c);
    }
  out.diagonally_aware = kind == AugmentKind::diagonal || psi.diagonally_aware;
  return out;
}

ApeMatrix ape_compute(const Graph& g, ApeKind kind, const std::vector<double>& times) {
  require_undirected(g, "absolute encodings");
  const int n = g.n();
  if (kind == ApeKind::degree) {
    ApeMatrix out(n, 1, "degree", kExactQuantStep);
    for (int v = 0; v < n; ++v) out.at(v, 0) = g.degree(v);
    return out;
  }
  if (times.empty()) throw Error("encodings", "absolute encoding needs at least one time");
  std::string name = kind == ApeKind::rwse ? "rwse:" : "hkdiagse:";
  for (std::size_t i = 0; i < times.size(); ++i) name += (i ? "," : "") + format_number(times[i]);
  ApeMatrix out(n, static_cast<int>(times.size()), name, kSpectralQuantStep);
  if (kind == ApeKind::rwse) {
    int t_max = 0;
    for (double t : times) {
      if (t < 1 || t != std::floor(t)) throw Error("encodings", "random-walk steps must be positive integers");
      t_max = std::max(t_max, static_cast<int>(t));
    }
    const auto powers = spectral::power_stack(graph_matrix(g, MatrixKind::rw_norm_adjacency), t_max);
    for (std::size_t i = 0; i < times.size(); ++i)
      for (int v = 0; v < n; ++v) out.at(v, static_cast<int>(i)) = powers[static_cast<int>(times[i])](v, v);
    return out;
  }
  const auto eig = spectral::sym_eigen(laplacian(g));
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw Error("encodings", "heat kernel times must be positive");
    const auto h = spectral::spectral_apply(eig, spectral::functions::exp_neg(times[i]), true);
    for (int v = 0; v < n; ++v) out.at(v, static_cast<int>(i)) = h(v, v);
  }
  return out;
}

}  // namespace encodings

}  // namespace rpewl
