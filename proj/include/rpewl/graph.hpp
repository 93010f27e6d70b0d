#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rpewl/matrix.hpp"

namespace rpewl {

using Vertex = int;
using Arc = std::pair<Vertex, Vertex>;

// Simple unweighted graph. Undirected graphs store both orientations of every
// edge internally; `edge_count` reports unordered pairs for them.
class Graph {
 public:
  Graph() = default;

  /// Builds a canonical graph; undirected input is symmetrized and duplicates
  /// are dropped. Self-loops and out-of-range endpoints are rejected.
  static Graph from_edge_list(int n, bool directed, const std::vector<Arc>& pairs);

  int n() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }
  std::size_t edge_count() const noexcept { return directed_ ? arcs_.size() : arcs_.size() / 2; }

  /// Ordered pairs, sorted. For undirected graphs both orientations appear.
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  /// Unordered edges (u < v) for undirected graphs, arcs for directed ones.
  std::vector<Arc> edges() const;

  bool has_arc(Vertex u, Vertex v) const;
  const std::vector<Vertex>& out_neighbors(Vertex v) const { return out_[v]; }
  const std::vector<Vertex>& in_neighbors(Vertex v) const { return in_[v]; }
  int degree(Vertex v) const { return static_cast<int>(out_[v].size()); }
  std::vector<int> degree_sequence() const;

  DenseMatrix adjacency() const;
  /// Connected components of the underlying undirected graph; component id per vertex.
  std::vector<int> components(int* count = nullptr) const;
  bool connected() const;

  Graph without_edge(Vertex u, Vertex v) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.directed_ == b.directed_ && a.arcs_ == b.arcs_;
  }

 private:
  int n_ = 0;
  bool directed_ = false;
  std::vector<Arc> arcs_;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
};

// Graph plus per-node feature rows. A zero-column feature matrix means
// "unfeatured" and behaves as the constant feature 1.
struct FeaturedGraph {
  Graph graph;
  DenseMatrix features;

  FeaturedGraph() = default;
  explicit FeaturedGraph(Graph g);
  FeaturedGraph(Graph g, DenseMatrix x);

  int n() const noexcept { return graph.n(); }
  bool featured() const noexcept { return features.cols() > 0; }
  /// Feature row of v, with the unfeatured convention applied.
  std::vector<double> feature_row(Vertex v) const;
};

class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> mapping);
  static Permutation identity(int n);
  static Permutation random(int n, std::uint64_t seed);

  int n() const noexcept { return static_cast<int>(map_.size()); }
  int operator()(int v) const { return map_[v]; }
  const std::vector<int>& mapping() const noexcept { return map_; }
  Permutation inverse() const;

 private:
  std::vector<int> map_;
};

/// Edge (u,v) becomes (p(u),p(v)); feature row v moves to row p(v).
FeaturedGraph apply_permutation(const FeaturedGraph& g, const Permutation& p);
Graph apply_permutation(const Graph& g, const Permutation& p);

// Edge-list text format: "n m d directed" header, m lines "u v", then n
// feature rows of d values when d > 0.
// Blank lines and lines starting with '#' are skipped; errors carry
// "source:line".
class EdgeListReader {
 public:
  EdgeListReader(std::istream& in, std::string source);
  /// Reads the next graph block; false at clean end of input.
  bool next(FeaturedGraph& out);
  /// Returns the next non-comment line without consuming it, or empty at EOF.
  std::string peek_line();
  int line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }

 private:
  bool read_line(std::string& out);
  [[noreturn]] void fail(const std::string& message) const;

  std::istream& in_;
  std::string source_;
  int line_ = 0;
  bool has_pending_ = false;
  std::string pending_;
};

FeaturedGraph read_edge_list(std::istream& in, const std::string& source = "<stream>");
FeaturedGraph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const FeaturedGraph& g);
void write_edge_list_file(const std::string& path, const FeaturedGraph& g);

}  // namespace rpewl
