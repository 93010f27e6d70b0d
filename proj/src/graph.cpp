#include "rpewl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "rpewl/error.hpp"

namespace rpewl {

Graph Graph::from_edge_list(int n, bool directed, const std::vector<Arc>& pairs) {
  if (n < 0) throw Error("graph_core", "negative vertex count");
  Graph g;
  g.n_ = n;
  g.directed_ = directed;
  g.arcs_.reserve(directed ? pairs.size() : 2 * pairs.size());
  for (const auto& [u, v] : pairs) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw Error("graph_core", "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range for n=" +
                                    std::to_string(n));
    if (u == v) throw Error("graph_core", "self-loop at vertex " + std::to_string(u));
    g.arcs_.emplace_back(u, v);
    if (!directed) g.arcs_.emplace_back(v, u);
  }
  std::sort(g.arcs_.begin(), g.arcs_.end());
  g.arcs_.erase(std::unique(g.arcs_.begin(), g.arcs_.end()), g.arcs_.end());
  g.out_.assign(n, {});
  g.in_.assign(n, {});
  for (const auto& [u, v] : g.arcs_) {
    g.out_[u].push_back(v);
    g.in_[v].push_back(u);
  }
  for (auto& l : g.in_) std::sort(l.begin(), l.end());
  return g;
}

std::vector<Arc> Graph::edges() const {
  if (directed_) return arcs_;
  std::vector<Arc> out;
  out.reserve(arcs_.size() / 2);
  for (const auto& a : arcs_)
    if (a.first < a.second) out.push_back(a);
  return out;
}

bool Graph::has_arc(Vertex u, Vertex v) const {
  if (u < 0 || u >= n_) return false;
  const auto& l = out_[u];
  return std::binary_search(l.begin(), l.end(), v);
}

std::vector<int> Graph::degree_sequence() const {
  std::vector<int> d(n_);
  for (int v = 0; v < n_; ++v) d[v] = degree(v);
  return d;
}

DenseMatrix Graph::adjacency() const {
  DenseMatrix a(n_, n_);
  for (const auto& [u, v] : arcs_) a(u, v) = 1.0;
  return a;
}

std::vector<int> Graph::components(int* count) const {
  std::vector<int> comp(n_, -1);
  int next = 0;
  std::vector<Vertex> stack;
  for (int s = 0; s < n_; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const auto* list : {&out_[v], &in_[v]})
        for (Vertex w : *list)
          if (comp[w] < 0) {
            comp[w] = next;
            stack.push_back(w);
          }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

bool Graph::connected() const {
  int count = 0;
  components(&count);
  return count <= 1;
}

Graph Graph::without_edge(Vertex u, Vertex v) const {
  std::vector<Arc> kept;
  for (const auto& a : edges()) {
    const bool hit = directed_ ? (a == Arc{u, v}) : (a == Arc{std::min(u, v), std::max(u, v)});
    if (!hit) kept.push_back(a);
  }
  return from_edge_list(n_, directed_, kept);
}

FeaturedGraph::FeaturedGraph(Graph g) : graph(std::move(g)), features(graph.n(), 0) {}

FeaturedGraph::FeaturedGraph(Graph g, DenseMatrix x) : graph(std::move(g)), features(std::move(x)) {
  if (features.cols() == 0) features = DenseMatrix(graph.n(), 0);
  if (static_cast<int>(features.rows()) != graph.n())
    throw Error("graph_core", "feature row count " + std::to_string(features.rows()) + " differs from n=" +
                                  std::to_string(graph.n()));
  features.check_finite("graph_core");
}

std::vector<double> FeaturedGraph::feature_row(Vertex v) const {
  if (!featured()) return {1.0};
  const auto r = features.row(v);
  return {r.begin(), r.end()};
}

Permutation::Permutation(std::vector<int> mapping) : map_(std::move(mapping)) {
  std::vector<char> seen(map_.size(), 0);
  for (int x : map_) {
    if (x < 0 || x >= static_cast<int>(map_.size()) || seen[x])
      throw Error("graph_core", "mapping is not a bijection on {0..n-1}");
    seen[x] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 0);
  return Permutation(std::move(m));
}

Permutation Permutation::random(int n, std::uint64_t seed) {
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 0);
  std::mt19937_64 rng(seed);
  // Explicit Fisher-Yates: std::shuffle's draw pattern is implementation-defined.
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(m[i], m[j]);
  }
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = static_cast<int>(i);
  return Permutation(std::move(inv));
}

Graph apply_permutation(const Graph& g, const Permutation& p) {
  if (p.n() != g.n()) throw Error("graph_core", "permutation size differs from graph size");
  std::vector<Arc> mapped;
  mapped.reserve(g.arcs().size());
  for (const auto& [u, v] : g.arcs()) mapped.emplace_back(p(u), p(v));
  return Graph::from_edge_list(g.n(), g.directed(), mapped);
}

FeaturedGraph apply_permutation(const FeaturedGraph& g, const Permutation& p) {
  Graph mapped = apply_permutation(g.graph, p);
  DenseMatrix x(g.features.rows(), g.features.cols());
  for (int v = 0; v < g.n(); ++v)
    for (std::size_t c = 0; c < g.features.cols(); ++c) x(p(v), c) = g.features(v, c);
  return FeaturedGraph(std::move(mapped), std::move(x));
}

EdgeListReader::EdgeListReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

bool EdgeListReader::read_line(std::string& out) {
  if (has_pending_) {
    has_pending_ = false;
    out = std::move(pending_);
    return true;
  }
  std::string raw;
  while (std::getline(in_, raw)) {
    ++line_;
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    out = raw;
    return true;
  }
  return false;
}

std::string EdgeListReader::peek_line() {
  if (!has_pending_) {
    if (!read_line(pending_)) return {};
    has_pending_ = true;
  }
  return pending_;
}

void EdgeListReader::fail(const std::string& message) const {
  throw Error("graph_core", source_ + ":" + std::to_string(line_) + ": " + message);
}

bool EdgeListReader::next(FeaturedGraph& out) {
  std::string line;
  if (!read_line(line)) return false;
  long long n = -1, m = -1, d = -1, directed = -1;
  {
    std::istringstream ss(line);
    if (!(ss >> n >> m >> d >> directed)) fail("expected header \"n m d directed_flag\"");
    std::string extra;
    if (ss >> extra) fail("trailing token in header: " + extra);
  }
  if (n < 0 || m < 0 || d < 0 || (directed != 0 && directed != 1)) fail("invalid header values");
  std::vector<Arc> pairs;
  pairs.reserve(m);
  for (long long i = 0; i < m; ++i) {
    if (!read_line(line)) fail("unexpected end of input while reading edges");
    std::istringstream ss(line);
    long long u = 0, v = 0;
    std::string extra;
    if (!(ss >> u >> v) || (ss >> extra)) fail("expected edge line \"u v\"");
    if (u < 0 || v < 0 || u >= n || v >= n) fail("edge endpoint out of range");
    if (u == v) fail("self-loop at vertex " + std::to_string(u));
    pairs.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  DenseMatrix x(n, d);
  for (long long r = 0; r < (d > 0 ? n : 0); ++r) {
    if (!read_line(line)) fail("unexpected end of input while reading features");
    std::istringstream ss(line);
    for (long long c = 0; c < d; ++c) {
      std::string tok;
      if (!(ss >> tok)) fail("expected " + std::to_string(d) + " feature values");
      try {
        std::size_t used = 0;
        x(r, c) = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        fail("invalid feature value: " + tok);
      }
      if (!std::isfinite(x(r, c))) fail("non-finite feature value");
    }
    std::string extra;
    if (ss >> extra) fail("too many feature values");
  }
  out = FeaturedGraph(Graph::from_edge_list(static_cast<int>(n), directed == 1, pairs), std::move(x));
  return true;
}

FeaturedGraph read_edge_list(std::istream& in, const std::string& source) {
  EdgeListReader reader(in, source);
  FeaturedGraph g;
  if (!reader.next(g)) throw Error("graph_core", source + ": empty input");
  return g;
}

FeaturedGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("graph_core", "cannot open " + path);
  return read_edge_list(in, path);
}

void write_edge_list(std::ostream& out, const FeaturedGraph& g) {
  const auto edges = g.graph.edges();
  out << g.n() << ' ' << edges.size() << ' ' << g.features.cols() << ' ' << (g.graph.directed() ? 1 : 0) << '\n';
  for (const auto& [u, v] : edges) out << u << ' ' << v << '\n';
  if (g.featured()) {
    const auto old = out.precision(17);
    for (int v = 0; v < g.n(); ++v) {
      const auto r = g.features.row(v);
      for (std::size_t c = 0; c < r.size(); ++c) out << (c ? " " : "") << r[c];
      out << '\n';
    }
    out.precision(old);
  }
}

void write_edge_list_file(const std::string& path, const FeaturedGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error("graph_core", "cannot write " + path);
  write_edge_list(out, g);
}

}  // namespace rpewl
