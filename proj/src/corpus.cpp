#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include "rpewl/error.hpp"
#include "rpewl/generators.hpp"
#include "rpewl/harness.hpp"
#include "rpewl/structure.hpp"

namespace rpewl::harness {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Portable draws: libstdc++ and libc++ distributions differ, raw engine output does not.
int below(std::mt19937_64& rng, int k) { return static_cast<int>(rng() % static_cast<std::uint64_t>(k)); }
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Permutation shuffle(int n, std::mt19937_64& rng) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(m[i], m[below(rng, i + 1)]);
  return Permutation(std::move(m));
}

Graph connected_gnp(int n, double p, std::mt19937_64& rng) {
  for (;;) {
    const auto g = gen::gnp(n, p, rng());
    if (g.connected()) return g;
  }
}

// Degree-preserving double edge swaps; keeps the graph simple and connected.
Graph rewire(const Graph& g, std::mt19937_64& rng) {
  auto edges = g.edges();
  const int m = static_cast<int>(edges.size());
  if (m < 2) return g;
  std::set<Arc> present(edges.begin(), edges.end());
  auto key = [](int u, int v) { return u < v ? Arc{u, v} : Arc{v, u}; };
  for (int attempt = 0; attempt < 20 * m; ++attempt) {
    const int i = below(rng, m), j = below(rng, m);
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (rng() & 1) std::swap(c, d);
    if (a == c || a == d || b == c || b == d) continue;
    if (present.count(key(a, c)) || present.count(key(b, d))) continue;
    auto trial = edges;
    trial[i] = key(a, c);
    trial[j] = key(b, d);
    const auto h = Graph::from_edge_list(g.n(), false, trial);
    if (!h.connected()) continue;
    present.erase(edges[i]);
    present.erase(edges[j]);
    present.insert(trial[i]);
    present.insert(trial[j]);
    edges = std::move(trial);
  }
  return Graph::from_edge_list(g.n(), false, edges);
}

std::optional<Graph> random_regular(int n, int d, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 2000; ++attempt) {
    std::vector<int> points;
    for (int v = 0; v < n; ++v)
      for (int i = 0; i < d; ++i) points.push_back(v);
    for (int i = static_cast<int>(points.size()) - 1; i > 0; --i) std::swap(points[i], points[below(rng, i + 1)]);
    std::set<Arc> edges;
    bool ok = true;
    for (std::size_t i = 0; i < points.size() && ok; i += 2) {
      const int u = std::min(points[i], points[i + 1]), v = std::max(points[i], points[i + 1]);
      ok = u != v && edges.insert({u, v}).second;
    }
    if (ok) return Graph::from_edge_list(n, false, {edges.begin(), edges.end()});
  }
  return std::nullopt;
}

LabeledPair make(std::string id, Graph a, Graph b, std::string note, bool control = false) {
  return {std::move(id), FeaturedGraph(std::move(a)), FeaturedGraph(std::move(b)), std::move(note), control};
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

struct Term {
  std::string head;
  std::vector<std::string> args;
};

Term parse_term(const std::string& text) {
  Term t;
  const auto open = text.find('(');
  if (open == std::string::npos) {
    t.head = trim(text);
    return t;
  }
  if (text.back() != ')') throw Error("harness", "corpus term '" + text + "' is missing ')'");
  t.head = trim(text.substr(0, open));
  const std::string inner = text.substr(open + 1, text.size() - open - 2);
  if (t.head == "file") {
    t.args.push_back(trim(inner));
    return t;
  }
  std::size_t start = 0;
  while (start <= inner.size()) {
    const auto comma = inner.find(',', start);
    t.args.push_back(trim(inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return t;
}

// (n_max, count[, seed=S]) with defaults.
void sized_args(const Term& t, int& n_max, int& count, std::uint64_t& seed) {
  std::vector<std::string> positional;
  for (const auto& a : t.args) {
    if (a.rfind("seed=", 0) == 0) {
      try {
        seed = std::stoull(a.substr(5));
      } catch (const std::logic_error&) {
        throw Error("harness", "bad seed in corpus term " + t.head);
      }
    } else if (!a.empty()) {
      positional.push_back(a);
    }
  }
  if (positional.size() > 3) throw Error("harness", "too many arguments for corpus " + t.head);
  try {
    if (positional.size() > 0) n_max = std::stoi(positional[0]);
    if (positional.size() > 1) count = std::stoi(positional[1]);
    if (positional.size() > 2) seed = std::stoull(positional[2]);
  } catch (const std::logic_error&) {
    throw Error("harness", "bad number in corpus term " + t.head);
  }
  if (n_max < 2 || count < 0) throw Error("harness", "corpus " + t.head + " needs n_max >= 2 and count >= 0");
}

}  // namespace

Corpus standard_corpus() {
  Corpus c;
  c.name = "standard";
  {
    auto [g, h] = gen::fig_a_pair();
    c.pairs.push_back(make("fig_a", g, h, "cycle vs triangle with pendant"));
  }
  {
    auto [g, h] = gen::featured_c4_pair();
    c.pairs.push_back({"featured_c4", g, h, "C4 with features 1,2,3,4 vs 1,3,2,4", false});
  }
  c.pairs.push_back(make("c6_vs_2c3", gen::cycle(6), gen::disjoint_union(gen::cycle(3), gen::cycle(3)),
                         "hexagon vs two triangles"));
  c.pairs.push_back(make("shrikhande_vs_rook", gen::shrikhande(), gen::rook4x4(), "both SRG(16,6,2,2)"));
  {
    auto [g, h] = gen::cutvertex_pair();
    c.pairs.push_back(make("cutvertex", g, h, "resistance separates, shortest paths do not"));
  }
  std::mt19937_64 rng(20240601);
  auto control = [&](const std::string& id, const FeaturedGraph& g) {
    const auto p = shuffle(g.n(), rng);
    c.pairs.push_back({id, g, apply_permutation(g, p), "relabeled copy", true});
  };
  control("control_c6", FeaturedGraph(gen::cycle(6)));
  control("control_triangle_pendant", FeaturedGraph(gen::triangle_with_pendant()));
  control("control_featured_c4", gen::featured_c4_pair().first);
  control("control_shrikhande", FeaturedGraph(gen::shrikhande()));
  control("control_gnp9", FeaturedGraph(connected_gnp(9, 0.35, rng)));
  return c;
}

Corpus csl_corpus() {
  Corpus c;
  c.name = "csl";
  for (std::size_t i = 0; i < kCslSkips.size(); ++i)
    for (std::size_t j = i + 1; j < kCslSkips.size(); ++j) {
      const int s = kCslSkips[i], t = kCslSkips[j];
      c.pairs.push_back(make("csl_" + std::to_string(s) + "_" + std::to_string(t), gen::csl(kCslN, s),
                             gen::csl(kCslN, t), "CSL(41) skips " + std::to_string(s) + " vs " + std::to_string(t)));
    }
  return c;
}

Corpus random_corpus(int n_max, int count, std::uint64_t seed) {
  Corpus c;
  c.name = "random(" + std::to_string(n_max) + "," + std::to_string(count) + ",seed=" + std::to_string(seed) + ")";
  for (int i = 0; i < count; ++i) {
    std::mt19937_64 rng(mix(seed) ^ mix(static_cast<std::uint64_t>(i) + 1));
    const int n = 4 + below(rng, std::max(n_max - 3, 1));
    const double p = 0.25 + 0.35 * unit(rng);
    const auto a = connected_gnp(std::min(n, n_max), p, rng);
    // Some degree sequences force the graph; those pairs stay as controls.
    Graph b;
    bool iso = false;
    for (int attempt = 0; attempt < 10; ++attempt) {
      b = apply_permutation(rewire(a, rng), shuffle(a.n(), rng));
      iso = a.n() <= kIsomorphismOracleLimit && brute_force_isomorphic(FeaturedGraph(a), FeaturedGraph(b));
      if (!iso) break;
    }
    c.pairs.push_back(make("random-" + std::to_string(i), a, b,
                           "n=" + std::to_string(a.n()) + ", degree-preserving rewiring" + (iso ? ", isomorphic" : ""),
                           iso));
  }
  return c;
}

Corpus random_directed_corpus(int n_max, int count, std::uint64_t seed) {
  Corpus c;
  c.name = "random_directed(" + std::to_string(n_max) + "," + std::to_string(count) + ",seed=" +
           std::to_string(seed) + ")";
  for (int i = 0; i < count; ++i) {
    std::mt19937_64 rng(mix(seed ^ 0x64697265ULL) ^ mix(static_cast<std::uint64_t>(i) + 1));
    const int n = 3 + below(rng, std::max(n_max - 2, 1));
    const double p = 0.2 + 0.3 * unit(rng);
    std::set<Arc> arcs;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && unit(rng) < p) arcs.insert({u, v});
    std::set<Arc> flipped;
    for (const auto& [u, v] : arcs) {
      const bool flip = (rng() & 1) && !arcs.count({v, u});
      flipped.insert(flip ? Arc{v, u} : Arc{u, v});
    }
    const auto a = Graph::from_edge_list(n, true, {arcs.begin(), arcs.end()});
    const auto b = apply_permutation(Graph::from_edge_list(n, true, {flipped.begin(), flipped.end()}), shuffle(n, rng));
    c.pairs.push_back(make("directed-" + std::to_string(i), a, b, "n=" + std::to_string(n) + ", arcs partly reversed"));
  }
  return c;
}

Corpus wl_pairs_corpus(int n_max, int count, std::uint64_t seed) {
  Corpus c;
  c.name = "wl_pairs(" + std::to_string(n_max) + "," + std::to_string(count) + ",seed=" + std::to_string(seed) + ")";
  n_max = std::min(n_max, kIsomorphismOracleLimit);
  std::vector<std::pair<int, int>> shapes;
  for (int n = 6; n <= n_max; ++n)
    for (int d = 2; d <= 4 && d < n - 1; ++d)
      if ((n * d) % 2 == 0) shapes.emplace_back(n, d);
  if (shapes.empty()) return c;
  std::mt19937_64 rng(mix(seed ^ 0x776c7061ULL));
  int made = 0;
  for (int trial = 0; made < count && trial < 50 * (count + 1); ++trial) {
    const auto [n, d] = shapes[below(rng, static_cast<int>(shapes.size()))];
    const auto a = random_regular(n, d, rng), b = random_regular(n, d, rng);
    if (!a || !b || brute_force_isomorphic(FeaturedGraph(*a), FeaturedGraph(*b))) continue;
    c.pairs.push_back(make("regular-" + std::to_string(made), *a, *b,
                           "non-isomorphic " + std::to_string(d) + "-regular, n=" + std::to_string(n)));
    ++made;
  }
  return c;
}

Corpus file_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("harness", "cannot open corpus file " + path);
  EdgeListReader reader(in, path);
  std::vector<FeaturedGraph> graphs;
  FeaturedGraph g;
  while (reader.next(g)) graphs.push_back(g);
  if (graphs.size() % 2 != 0) throw Error("harness", path + ": corpus files need an even number of graphs");
  Corpus c;
  c.name = "file(" + path + ")";
  for (std::size_t i = 0; i < graphs.size(); i += 2)
    c.pairs.push_back({"file-" + std::to_string(i / 2), graphs[i], graphs[i + 1], path, false});
  return c;
}

Corpus filter(const Corpus& c, const std::function<bool(const LabeledPair&)>& keep, const std::string& suffix) {
  Corpus out;
  out.name = c.name + suffix;
  for (const auto& p : c.pairs)
    if (keep(p)) out.pairs.push_back(p);
  return out;
}

Corpus build_corpus(const std::string& spec) {
  Corpus out;
  std::vector<std::string> terms;
  int depth = 0;
  std::string cur;
  for (char ch : spec) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == '+' && depth == 0) {
      terms.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  terms.push_back(cur);
  for (const auto& text : terms) {
    const auto t = parse_term(trim(text));
    Corpus part;
    if (t.head == "standard" && t.args.empty()) part = standard_corpus();
    else if (t.head == "csl" && t.args.empty()) part = csl_corpus();
    else if (t.head == "file" && t.args.size() == 1) part = file_corpus(t.args[0]);
    else if (t.head == "random" || t.head == "random_directed" || t.head == "wl_pairs") {
      int n_max = 8, count = 100;
      std::uint64_t seed = 0;
      sized_args(t, n_max, count, seed);
      part = t.head == "random"            ? random_corpus(n_max, count, seed)
             : t.head == "random_directed" ? random_directed_corpus(n_max, count, seed)
                                           : wl_pairs_corpus(n_max, count, seed);
    } else {
      throw Error("harness", "unknown corpus term '" + trim(text) + "'");
    }
    out.name += (out.name.empty() ? "" : "+") + part.name;
    for (auto& p : part.pairs) out.pairs.push_back(std::move(p));
  }
  return out;
}

}  // namespace rpewl::harness
