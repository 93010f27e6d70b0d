#include <chrono>
#include <map>
#include <set>

#include "rpewl/error.hpp"
#include "rpewl/harness.hpp"

namespace rpewl::harness {

namespace {

std::size_t joint_classes(const std::vector<ColorId>& a, const std::vector<ColorId>& b) {
  std::set<ColorId> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return s.size();
}

// Labeled graph on n vertices whose edges are the set bits of `mask`, in
// (0,1), (0,2), ..., (n-2,n-1) order.
Graph from_mask(int n, std::uint64_t mask) {
  std::vector<Arc> e;
  int bit = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v, ++bit)
      if (mask >> bit & 1) e.emplace_back(u, v);
  return Graph::from_edge_list(n, false, e);
}

template <class Fn>
void for_each_connected(int n_max, Fn&& fn) {
  for (int n = 1; n <= n_max; ++n) {
    const int bits = n * (n - 1) / 2;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
      const auto g = from_mask(n, mask);
      if (!g.connected()) continue;
      if (!fn(n, g)) return;
    }
  }
}

ColorId final_digest(const Graph& g, const RpeTensor& psi) {
  refine::EngineOptions opt;
  opt.min_rounds = g.n();
  return refine::rpe_aug_wl(FeaturedGraph(g), psi, opt).digest(g.n());
}

}  // namespace

int joint_stable_round(const refine::ColorHistory& a, const refine::ColorHistory& b) {
  const int last = std::min(a.last_round(), b.last_round());
  for (int t = std::max(a.stable_round, b.stable_round); t + 1 <= last; ++t)
    if (joint_classes(a.rounds[t], b.rounds[t]) == joint_classes(a.rounds[t + 1], b.rounds[t + 1])) return t;
  return -1;
}

std::optional<std::pair<Graph, Graph>> find_cutvertex_pair(int n_max) {
  if (n_max > 8) throw Error("harness", "cut-vertex search is limited to 8 vertices");
  std::optional<std::pair<Graph, Graph>> found;
  int current_n = 0;
  // SPD digest -> (RD digest, first graph with it)
  std::map<ColorId, std::vector<std::pair<ColorId, Graph>>> seen;
  for_each_connected(n_max, [&](int n, const Graph& g) {
    if (n != current_n) {
      seen.clear();
      current_n = n;
    }
    const auto spd = final_digest(g, encodings::rpe_spd(g));
    const auto rd = final_digest(g, encodings::rpe_resistance(g));
    auto& bucket = seen[spd];
    for (const auto& [other_rd, other] : bucket)
      if (other_rd != rd) {
        found.emplace(other, g);
        return false;
      }
    bucket.emplace_back(rd, g);
    return true;
  });
  return found;
}

bool combinatorially_aware_on(const RpeTensor& pa, const Graph& a, const RpeTensor& pb, const Graph& b) {
  std::map<std::vector<Token>, bool> status;
  auto scan = [&status](const RpeTensor& psi, const Graph& g) {
    if (psi.n != g.n()) throw Error("harness", "encoding size does not match graph size");
    const auto tok = tokenize(psi);
    for (int u = 0; u < g.n(); ++u)
      for (int v = 0; v < g.n(); ++v) {
        std::vector<Token> key(tok.entry(u, v), tok.entry(u, v) + tok.k);
        const bool edge = u != v && g.has_arc(u, v);
        const auto [it, inserted] = status.emplace(std::move(key), edge);
        if (!inserted && it->second != edge) return false;
      }
    return true;
  };
  return scan(pa, a) && scan(pb, b);
}

std::optional<AwarenessWitness> find_awareness_counterexample(const std::string& spec, int n_max) {
  if (n_max > 7) throw Error("harness", "awareness search is limited to 7 vertices");
  std::optional<AwarenessWitness> found;
  for_each_connected(n_max, [&](int n, const Graph& g) {
    const auto psi = compute_rpe(spec, g);
    const auto tok = tokenize(psi);
    std::map<std::vector<Token>, Arc> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (g.has_arc(u, v)) edges.emplace(std::vector<Token>(tok.entry(u, v), tok.entry(u, v) + tok.k), Arc{u, v});
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        if (g.has_arc(u, v)) continue;
        const auto it = edges.find(std::vector<Token>(tok.entry(u, v), tok.entry(u, v) + tok.k));
        if (it == edges.end()) continue;
        found = AwarenessWitness{g, it->second, Arc{u, v}, psi.at(u, v, 0)};
        return false;
      }
    return true;
  });
  return found;
}

std::vector<std::string> csl_encodings() {
  return {"adjacency", "spd", "resistance", "rspe:inv0", "power:sym_norm_adjacency:20"};
}

std::vector<CslRow> csl_experiment(int jobs) {
  const auto corpus = csl_corpus();
  std::vector<CslRow> rows;
  for (const auto& enc : csl_encodings()) {
    CslRow row;
    row.encoding = enc;
    row.total = static_cast<int>(corpus.pairs.size());
    std::vector<char> hit(corpus.pairs.size(), 0);
    const auto start = std::chrono::steady_clock::now();
    parallel_for(corpus.pairs.size(), jobs, [&](std::size_t i) {
      const auto& p = corpus.pairs[i];
      hit[i] = run_test(refine::TestKind::psi_wl, enc, p.a, p.b).distinguishable;
    });
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (std::size_t i = 0; i < hit.size(); ++i) {
      if (hit[i]) ++row.distinguished;
      else row.missed.push_back(corpus.pairs[i].id);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rpewl::harness
