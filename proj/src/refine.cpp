#include "rpewl/refine.hpp"

#include <cstring>
#include <functional>
#include <map>
#include <set>

#include "rpewl/error.hpp"

namespace rpewl::refine {

namespace {

enum Tag : std::uint8_t {
  kInitial = 1,
  kClassical = 2,
  kAugmented = 3,
  kPairInitial = 4,
  kPair = 5,
  kApeRow = 6,
  kRpeTriple = 7,
};

void append(std::vector<std::uint8_t>& buf, const ColorId& c) { buf.insert(buf.end(), c.bytes.begin(), c.bytes.end()); }

void append(std::vector<std::uint8_t>& buf, const Token* t, int k) {
  for (int c = 0; c < k; ++c) {
    const auto x = static_cast<std::uint64_t>(t[c]);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  }
}

std::vector<ColorId> feature_colors(const FeaturedGraph& g, double step) {
  const auto tok = tokenize_features(g, step);
  std::vector<ColorId> out(g.n());
  for (int v = 0; v < g.n(); ++v) out[v] = ColorHasher(kInitial).add(std::span(tok.row(v), tok.l)).finish();
  return out;
}

std::size_t distinct(const std::vector<ColorId>& colors) {
  std::vector<ColorId> c = colors;
  std::sort(c.begin(), c.end());
  return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
}

using Step = std::function<std::vector<ColorId>(const std::vector<ColorId>&)>;

// Iterates `step` until the partition stops changing and at least
// min_rounds rounds exist past round 0.
ColorHistory iterate(int n, bool pairs, std::vector<ColorId> initial, const Step& step, int min_rounds, int cap) {
  ColorHistory h;
  h.n = n;
  h.pairs = pairs;
  h.rounds.push_back(std::move(initial));
  if (n == 0) {
    h.stable_round = 0;
    while (h.last_round() < min_rounds) h.rounds.emplace_back();
    return h;
  }
  std::size_t classes = distinct(h.rounds.back());
  bool stable = false;
  while (!stable || h.last_round() < min_rounds) {
    auto next = step(h.rounds.back());
    const std::size_t c = distinct(next);
    h.rounds.push_back(std::move(next));
    if (!stable && c == classes) {
      stable = true;
      h.stable_round = h.last_round();
      if (h.stable_round > cap) throw Error("refine", "refinement exceeded its round bound");
    }
    classes = c;
  }
  return h;
}

void check_pair(const FeaturedGraph& g, const RpeTensor& psi) {
  if (psi.n != g.n()) throw Error("refine", "encoding size " + std::to_string(psi.n) + " does not match graph size " +
                                                std::to_string(g.n()));
}

}  // namespace

std::size_t ColorHistory::class_count(int round) const { return distinct(rounds.at(round)); }

ColorId ColorHistory::digest(int round) const { return multiset_digest(rounds.at(round)); }

std::vector<int> ColorHistory::partition(int round) const {
  std::map<ColorId, int> ids;
  std::vector<int> out;
  for (const auto& c : rounds.at(round)) out.push_back(ids.emplace(c, static_cast<int>(ids.size())).first->second);
  return out;
}

ColorHistory wl_classical(const FeaturedGraph& g, const EngineOptions& opt) {
  const int n = g.n();
  Step step = [&](const std::vector<ColorId>& cur) {
    std::vector<ColorId> next(n);
    std::vector<std::uint8_t> buf;
    for (int v = 0; v < n; ++v) {
      buf.clear();
      for (int u : g.graph.out_neighbors(v)) append(buf, cur[u]);
      ColorHasher h(kClassical);
      h.add(cur[v]);
      if (buf.empty()) h.add(std::int64_t{0});
      else h.add_multiset(buf, 16);
      next[v] = h.finish();
    }
    return next;
  };
  return iterate(n, false, feature_colors(g, opt.feature_step), step, opt.min_rounds, n);
}

ColorHistory rpe_aug_wl(const FeaturedGraph& g, const RpeTensor& psi, const EngineOptions& opt) {
  check_pair(g, psi);
  const int n = g.n();
  const auto tok = tokenize(psi);
  const std::size_t record = 16 + 8 * static_cast<std::size_t>(psi.k);
  Step step = [&](const std::vector<ColorId>& cur) {
    std::vector<ColorId> next(n);
    std::vector<std::uint8_t> buf;
    buf.reserve(record * n);
    for (int v = 0; v < n; ++v) {
      buf.clear();
      for (int u = 0; u < n; ++u) {
        append(buf, cur[u]);
        append(buf, tok.entry(v, u), psi.k);
      }
      next[v] = ColorHasher(kAugmented).add(cur[v]).add_multiset(buf, record).finish();
    }
    return next;
  };
  return iterate(n, false, feature_colors(g, opt.feature_step), step, opt.min_rounds, n);
}

ColorHistory rpe_2_wl(const FeaturedGraph& g, const RpeTensor& psi, const EngineOptions& opt) {
  check_pair(g, psi);
  const int n = g.n();
  if (n > kPairEngineLimit)
    throw Error("refine", "pair refinement is capped at n = " + std::to_string(kPairEngineLimit));
  const auto tok = tokenize(psi);
  const auto ftok = tokenize_features(g, opt.feature_step);
  std::vector<ColorId> init(static_cast<std::size_t>(n) * n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      init[static_cast<std::size_t>(u) * n + v] = ColorHasher(kPairInitial)
                                                      .add(std::span(ftok.row(u), ftok.l))
                                                      .add(std::span(ftok.row(v), ftok.l))
                                                      .add(std::span(tok.entry(u, v), psi.k))
                                                      .finish();
  Step step = [&](const std::vector<ColorId>& cur) {
    std::vector<ColorId> next(cur.size());
    std::vector<std::uint8_t> row, col;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        row.clear();
        col.clear();
        for (int w = 0; w < n; ++w) {
          append(row, cur[static_cast<std::size_t>(u) * n + w]);
          append(col, cur[static_cast<std::size_t>(w) * n + v]);
        }
        const std::size_t i = static_cast<std::size_t>(u) * n + v;
        next[i] = ColorHasher(kPair).add(cur[i]).add_multiset(row, 16).add_multiset(col, 16).finish();
      }
    return next;
  };
  return iterate(n, true, std::move(init), step, opt.min_rounds, n * n);
}

std::string to_string(TestKind kind) {
  switch (kind) {
    case TestKind::raw_ape: return "raw_ape";
    case TestKind::raw_rpe: return "raw_rpe";
    case TestKind::psi_wl: return "psi_wl";
    case TestKind::psi_2wl: return "psi_2wl";
    case TestKind::classical: return "classical";
  }
  return "?";
}

TestKind test_kind_from_string(const std::string& s) {
  for (auto k : {TestKind::raw_ape, TestKind::raw_rpe, TestKind::psi_wl, TestKind::psi_2wl, TestKind::classical})
    if (to_string(k) == s) return k;
  throw Error("refine", "unknown test: " + s);
}

namespace {

using Engine = std::function<ColorHistory(int min_rounds)>;

Verdict compare_engines(TestKind test, const Engine& run_a, const Engine& run_b) {
  auto ha = run_a(0);
  auto hb = run_b(0);
  const int depth = std::max(ha.stable_round, hb.stable_round);
  if (ha.last_round() < depth) ha = run_a(depth);
  if (hb.last_round() < depth) hb = run_b(depth);
  Verdict v;
  v.test = test;
  v.stable_a = ha.stable_round;
  v.stable_b = hb.stable_round;
  for (int t = 0; t <= depth; ++t) {
    v.digests_a.push_back(ha.digest(t));
    v.digests_b.push_back(hb.digest(t));
    if (!v.separating_round && v.digests_a.back() != v.digests_b.back()) v.separating_round = t;
  }
  v.distinguishable = v.separating_round.has_value();
  return v;
}

void check_compatible(const RpeTensor& a, const RpeTensor& b) {
  if (a.k != b.k)
    throw Error("refine", "encodings have different channel counts (" + std::to_string(a.k) + " vs " +
                              std::to_string(b.k) + ")");
  if (a.quant_step != b.quant_step) throw Error("refine", "encodings use different quant steps");
}

Verdict single_round(TestKind test, ColorId a, ColorId b) {
  Verdict v;
  v.test = test;
  v.digests_a = {a};
  v.digests_b = {b};
  v.distinguishable = a != b;
  if (v.distinguishable) v.separating_round = 0;
  return v;
}

}  // namespace

Verdict compare_classical(const FeaturedGraph& a, const FeaturedGraph& b, const EngineOptions& opt) {
  auto run = [&opt](const FeaturedGraph& g) {
    return [gp = &g, opt](int min_rounds) {
      EngineOptions o = opt;
      o.min_rounds = min_rounds;
      return wl_classical(*gp, o);
    };
  };
  return compare_engines(TestKind::classical, run(a), run(b));
}

Verdict compare_psi_wl(const FeaturedGraph& a, const FeaturedGraph& b, const RpeTensor& psi_a, const RpeTensor& psi_b,
                       const EngineOptions& opt) {
  check_compatible(psi_a, psi_b);
  auto run = [&opt](const FeaturedGraph& g, const RpeTensor& psi) {
    return [gp = &g, pp = &psi, opt](int min_rounds) {
      EngineOptions o = opt;
      o.min_rounds = min_rounds;
      return rpe_aug_wl(*gp, *pp, o);
    };
  };
  return compare_engines(TestKind::psi_wl, run(a, psi_a), run(b, psi_b));
}

Verdict compare_psi_2wl(const FeaturedGraph& a, const FeaturedGraph& b, const RpeTensor& psi_a,
                        const RpeTensor& psi_b, const EngineOptions& opt) {
  check_compatible(psi_a, psi_b);
  auto run = [&opt](const FeaturedGraph& g, const RpeTensor& psi) {
    return [gp = &g, pp = &psi, opt](int min_rounds) {
      EngineOptions o = opt;
      o.min_rounds = min_rounds;
      return rpe_2_wl(*gp, *pp, o);
    };
  };
  return compare_engines(TestKind::psi_2wl, run(a, psi_a), run(b, psi_b));
}

Verdict compare_raw_ape(const FeaturedGraph& a, const FeaturedGraph& b, const ApeMatrix& phi_a, const ApeMatrix& phi_b,
                        const EngineOptions& opt) {
  if (phi_a.l != phi_b.l) throw Error("refine", "absolute encodings have different widths");
  if (phi_a.quant_step != phi_b.quant_step) throw Error("refine", "absolute encodings use different quant steps");
  auto digest = [&opt](const FeaturedGraph& g, const ApeMatrix& phi) {
    if (phi.n != g.n()) throw Error("refine", "absolute encoding size does not match graph size");
    const auto f = tokenize_features(g, opt.feature_step);
    const auto t = tokenize(phi);
    std::vector<ColorId> rows(g.n());
    for (int v = 0; v < g.n(); ++v)
      rows[v] = ColorHasher(kApeRow).add(std::span(f.row(v), f.l)).add(std::span(t.row(v), t.l)).finish();
    return multiset_digest(std::move(rows));
  };
  return single_round(TestKind::raw_ape, digest(a, phi_a), digest(b, phi_b));
}

Verdict compare_raw_rpe(const FeaturedGraph& a, const FeaturedGraph& b, const RpeTensor& psi_a,
                        const RpeTensor& psi_b, const EngineOptions& opt) {
  check_compatible(psi_a, psi_b);
  auto digest = [&opt](const FeaturedGraph& g, const RpeTensor& psi) {
    check_pair(g, psi);
    const int n = g.n();
    const auto f = tokenize_features(g, opt.feature_step);
    const auto t = tokenize(psi);
    std::vector<ColorId> triples;
    triples.reserve(static_cast<std::size_t>(n) * n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        triples.push_back(ColorHasher(kRpeTriple)
                              .add(std::span(f.row(u), f.l))
                              .add(std::span(f.row(v), f.l))
                              .add(std::span(t.entry(u, v), t.k))
                              .finish());
    return multiset_digest(std::move(triples));
  };
  return single_round(TestKind::raw_rpe, digest(a, psi_a), digest(b, psi_b));
}

}  // namespace rpewl::refine
