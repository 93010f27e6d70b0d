#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "rpewl/error.hpp"
#include "rpewl/harness.hpp"
#include "rpewl/structure.hpp"

namespace rpewl::harness {

namespace {

using refine::TestKind;

constexpr double kBridgeTolerance = 1e-9;
constexpr double kDiagonalTolerance = 1e-8;

struct PairOutcome {
  bool applicable = true;
  std::string na_reason;
  int checks = 0;
  std::vector<std::string> violations;
  std::map<std::string, double> maxima;
  std::map<std::string, double> minima;
  std::map<std::string, double> counts;
  std::vector<std::string> notes;

  void skip(std::string why) {
    applicable = false;
    na_reason = std::move(why);
  }
  void raise(const std::string& key, double v) {
    auto [it, fresh] = maxima.emplace(key, v);
    if (!fresh) it->second = std::max(it->second, v);
  }
  void lower(const std::string& key, double v) {
    auto [it, fresh] = minima.emplace(key, v);
    if (!fresh) it->second = std::min(it->second, v);
  }
};

using PairCheck = std::function<void(const LabeledPair&, PairOutcome&)>;

struct Theorem {
  std::string id;
  std::string claim;
  std::function<TheoremResult(const Theorem&, const Corpus&, const VerifyOptions&)> run;
};

bool distinguishes(TestKind t, const std::string& spec, const LabeledPair& p) {
  return run_test(t, spec, p.a, p.b).distinguishable;
}

const char* yes_no(bool b) { return b ? "separates" : "does not separate"; }

int order(const LabeledPair& p) { return std::max(p.a.n(), p.b.n()); }
bool directed(const LabeledPair& p) { return p.a.graph.directed() || p.b.graph.directed(); }
bool featured(const LabeledPair& p) { return p.a.featured() || p.b.featured(); }
bool connected(const LabeledPair& p) { return p.a.graph.connected() && p.b.graph.connected(); }
bool has_isolated(const Graph& g) {
  for (int v = 0; v < g.n(); ++v)
    if (g.degree(v) == 0 && g.in_neighbors(v).empty()) return true;
  return false;
}

TheoremResult run_pairs(const Theorem& th, const Corpus& c, const VerifyOptions& opt, const PairCheck& fn) {
  std::vector<PairOutcome> out(c.pairs.size());
  parallel_for(c.pairs.size(), opt.jobs, [&](std::size_t i) {
    try {
      fn(c.pairs[i], out[i]);
    } catch (const std::exception& e) {
      out[i] = PairOutcome{};
      out[i].skip(std::string("computation failed: ") + e.what());
    }
  });
  TheoremResult r;
  r.id = th.id;
  r.claim = th.claim;
  r.corpus = c.name;
  r.tolerances["quant_step"] = kSpectralQuantStep;
  int failures = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& o = out[i];
    const auto& id = c.pairs[i].id;
    if (!o.applicable) {
      r.not_applicable.push_back({id, o.na_reason});
      if (o.na_reason.rfind("computation failed", 0) == 0) ++failures;
      continue;
    }
    ++r.eligible;
    r.checks += o.checks;
    for (const auto& v : o.violations) r.violations.push_back({id, v});
    for (const auto& [k, v] : o.maxima) {
      auto [it, fresh] = r.metrics.emplace(k, v);
      if (!fresh) it->second = std::max(it->second, v);
    }
    for (const auto& [k, v] : o.minima) {
      auto [it, fresh] = r.metrics.emplace(k, v);
      if (!fresh) it->second = std::min(it->second, v);
    }
    for (const auto& [k, v] : o.counts) r.metrics[k] += v;
    for (const auto& n : o.notes) r.notes.push_back(id + ": " + n);
  }
  r.metrics["computation_failures"] = failures;
  if (r.eligible == 0) r.status = Status::not_applicable;
  else r.status = r.violations.empty() ? Status::pass : Status::fail;
  return r;
}

// Pair engine is cubic or worse per round; larger pairs are left out.
bool pair_engine_fits(const LabeledPair& p, const VerifyOptions& opt, PairOutcome& o) {
  if (order(p) <= opt.pair_engine_max_n) return true;
  o.skip("order " + std::to_string(order(p)) + " exceeds the pair-engine limit " +
         std::to_string(opt.pair_engine_max_n));
  return false;
}

bool undirected_only(const LabeledPair& p, PairOutcome& o) {
  if (!directed(p)) return true;
  o.skip("directed graph");
  return false;
}

// Violation when `strong` fails to separate a pair that `weak` separates.
void implication(const LabeledPair& p, PairOutcome& o, TestKind t, const std::string& strong,
                 const std::string& weak) {
  const bool s = distinguishes(t, strong, p), w = distinguishes(t, weak, p);
  ++o.checks;
  if (w && !s)
    o.violations.push_back(to_string(t) + ": " + weak + " separates, " + strong + " does not");
}

void equivalence(const LabeledPair& p, PairOutcome& o, TestKind t1, const std::string& e1, TestKind t2,
                 const std::string& e2) {
  const bool x = distinguishes(t1, e1, p), y = distinguishes(t2, e2, p);
  ++o.checks;
  if (x != y)
    o.violations.push_back(to_string(t1) + "(" + e1 + ") " + yes_no(x) + ", " + to_string(t2) + "(" + e2 + ") " +
                           yes_no(y));
}

TheoremResult verify_wl_equals_2wl(const Theorem& th, const Corpus& c, const VerifyOptions& opt) {
  static const std::vector<std::string> encs = {"adjacency", "spd", "resistance", "pinv", "heat:1"};
  auto r = run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (!undirected_only(p, o) || !pair_engine_fits(p, opt, o)) return;
    for (const auto& e : encs) equivalence(p, o, TestKind::psi_wl, e, TestKind::psi_2wl, e);
  });
  r.notes.insert(r.notes.begin(), "encodings: adjacency, spd, resistance, pinv, heat:1 (symmetric on undirected graphs)");
  return r;
}

TheoremResult verify_ape_to_rpe(const Theorem& th, const Corpus& c, const VerifyOptions& opt) {
  static const std::vector<std::string> apes = {"degree", "rwse:1,2,3,4", "hkdiagse:1,2"};
  return run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (!undirected_only(p, o) || !pair_engine_fits(p, opt, o)) return;
    for (const auto& phi : apes) {
      equivalence(p, o, TestKind::raw_ape, phi, TestKind::psi_wl, "pair:" + phi);
      equivalence(p, o, TestKind::raw_ape, phi, TestKind::psi_2wl, "pair:" + phi);
    }
  });
}

TheoremResult verify_rpe_to_ape(const Theorem& th, const Corpus& c, const VerifyOptions& opt) {
  static const std::vector<std::string> encs = {"resistance", "spd", "diag+adjacency"};
  return run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (featured(p)) return o.skip("featured pair");
    if (!undirected_only(p, o) || !pair_engine_fits(p, opt, o)) return;
    for (const auto& e : encs) equivalence(p, o, TestKind::psi_2wl, e, TestKind::raw_ape, "canonical:" + e);
  });
}

// Existence claim: some featured pair is separated by the pair engine and
// missed by the canonical node readout.
TheoremResult verify_featured_gap(const Theorem& th, const Corpus& c, const VerifyOptions& opt) {
  auto r = run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (!featured(p)) return o.skip("unfeatured pair");
    if (!undirected_only(p, o) || !pair_engine_fits(p, opt, o)) return;
    const bool pair = distinguishes(TestKind::psi_2wl, "adjacency", p);
    const bool node = distinguishes(TestKind::raw_ape, "canonical:adjacency", p);
    ++o.checks;
    const std::string line = std::string("psi_2wl(adjacency) ") + yes_no(pair) + ", raw_ape(canonical:adjacency) " +
                             yes_no(node);
    o.notes.push_back(line);
    o.counts["witnesses"] += pair && !node ? 1 : 0;
  });
  const bool witnessed = r.metrics.count("witnesses") && r.metrics.at("witnesses") > 0;
  if (r.eligible > 0 && !witnessed) {
    r.status = Status::fail;
    for (const auto& n : r.notes) {
      const auto colon = n.find(": ");
      r.violations.push_back({n.substr(0, colon), "no gap: " + n.substr(colon + 2)});
    }
  }
  return r;
}

TheoremResult verify_distance_kernel(const Theorem& th, const Corpus& c, const VerifyOptions& opt) {
  auto r = run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (!undirected_only(p, o)) return;
    for (const auto& f : kKernelFunctions) {
      implication(p, o, TestKind::psi_wl, "distance:" + f, "kernel:" + f);
      implication(p, o, TestKind::psi_wl, "diag+kernel:" + f, "distance:" + f);
    }
  });
  r.notes.insert(r.notes.begin(), "both directions: distance over kernel, diagonally augmented kernel over distance");
  return r;
}

TheoremResult verify_rd_pinv(const Theorem& th, const Corpus& c, const VerifyOptions& opt) {
  return run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (!undirected_only(p, o)) return;
    equivalence(p, o, TestKind::psi_wl, "resistance", TestKind::psi_wl, "pinv");
  });
}

TheoremResult verify_power_stack(const Theorem& th, const Corpus& c, const VerifyOptions& opt,
                                 const std::string& stack, const std::string& kernel_head, bool normalized) {
  return run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (!undirected_only(p, o)) return;
    if (normalized && (has_isolated(p.a.graph) || has_isolated(p.b.graph)))
      return o.skip("isolated vertex; normalized spectra do not match");
    for (const auto& f : kKernelFunctions) implication(p, o, TestKind::psi_wl, stack, kernel_head + f);
  });
}

TheoremResult verify_matrices(const Theorem& th, const Corpus& c, const VerifyOptions& opt) {
  static const std::vector<std::string> mats = {"adjacency",  "sym_norm_adjacency", "rw_norm_adjacency",
                                                "laplacian",  "sym_norm_laplacian", "rw_norm_laplacian"};
  return run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (!undirected_only(p, o)) return;
    for (const auto& m : mats) equivalence(p, o, TestKind::psi_wl, m, TestKind::classical, "wl");
  });
}

TheoremResult verify_magnetic(const Theorem& th, const Corpus& c, const VerifyOptions& opt) {
  return run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (!directed(p)) return o.skip("undirected pair");
    for (const char* alpha : {"1/4", "1/3"})
      implication(p, o, TestKind::psi_wl, "directed_stack", std::string("magnetic:") + alpha);
  });
}

TheoremResult verify_aware_over_wl(const Theorem& th, const Corpus& c, const VerifyOptions& opt) {
  const std::string spec = opt.encoding;
  const std::string rel = is_absolute(spec) ? "pair:" + spec : spec;
  auto r = run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (!undirected_only(p, o)) return;
    const auto [x, y] = compute_rpe_pair(rel, p.a.graph, p.b.graph);
    if (!combinatorially_aware_on(x, p.a.graph, y, p.b.graph))
      return o.skip(spec + " is not combinatorially aware on this pair");
    implication(p, o, TestKind::psi_wl, spec, "wl");
  });
  r.notes.insert(r.notes.begin(), "encoding: " + spec);
  return r;
}

void check_bridges(const Graph& g, const std::string& side, PairOutcome& o) {
  const auto rd = encodings::rpe_resistance(g);
  const auto cut = bridges(g);
  for (const auto& [u, v] : g.edges()) {
    const double r = rd.at(u, v, 0);
    const bool bridge = std::binary_search(cut.begin(), cut.end(), Arc{u, v});
    const bool unit = std::abs(r - 1.0) <= kBridgeTolerance;
    ++o.checks;
    if (bridge) o.raise("max_bridge_rd_error", std::abs(r - 1.0));
    else o.lower("min_nonbridge_rd_gap", 1.0 - r);
    o.raise("max_edge_rd", r);
    std::ostringstream why;
    why.precision(17);
    if (bridge != unit)
      why << side << " edge (" << u << "," << v << ") RD=" << r << (bridge ? " is a bridge" : " is not a bridge");
    else if (r > 1.0 + kBridgeTolerance)
      why << side << " edge (" << u << "," << v << ") RD=" << r << " exceeds 1";
    if (!why.str().empty()) o.violations.push_back(why.str());
  }
}

TheoremResult verify_cut_edges(const Theorem& th, const Corpus& c, const VerifyOptions& opt) {
  auto r = run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (!undirected_only(p, o)) return;
    if (!connected(p)) return o.skip("disconnected graph");
    const Graph& a = p.a.graph;
    const Graph& b = p.b.graph;
    check_bridges(a, "a", o);
    if (!(p.control && a == b)) check_bridges(b, "b", o);

    refine::EngineOptions eo;
    eo.min_rounds = 2 * (a.n() + b.n()) + 2;
    const FeaturedGraph fa(a), fb(b);
    const auto ha = refine::rpe_aug_wl(fa, encodings::rpe_resistance(a), eo);
    const auto hb = refine::rpe_aug_wl(fb, encodings::rpe_resistance(b), eo);
    const int last = std::min(ha.last_round(), hb.last_round());
    bool same = true;
    for (int t = 0; t <= last && same; ++t) same = ha.digest(t) == hb.digest(t);

    const int t = joint_stable_round(ha, hb);
    if (t < 0) throw Error("harness", "no joint stable round within the computed history");
    std::map<std::pair<ColorId, ColorId>, std::pair<bool, std::string>> status;
    auto scan = [&](const Graph& g, const refine::ColorHistory& h, const char* side) {
      const auto cut = bridges(g);
      for (const auto& [u, v] : g.edges()) {
        auto key = std::minmax(h.rounds[t][u], h.rounds[t][v]);
        const bool bridge = std::binary_search(cut.begin(), cut.end(), Arc{u, v});
        const std::string where = std::string(side) + " (" + std::to_string(u) + "," + std::to_string(v) + ")";
        const auto [it, fresh] = status.emplace(key, std::make_pair(bridge, where));
        ++o.checks;
        if (!fresh && it->second.first != bridge)
          o.violations.push_back("edges " + it->second.second + " and " + where +
                                 " share endpoint colors but differ in bridge status");
      }
    };
    scan(a, ha, "a");
    scan(b, hb, "b");

    if (same) {
      ++o.checks;
      o.counts["rd_indistinguishable_pairs"] += 1;
      if (!tree_isomorphic(block_cut_edge_tree(a), block_cut_edge_tree(b)))
        o.violations.push_back("RD refinement does not separate the pair but block cut-edge trees differ");
    }
  });
  r.tolerances["bridge_rd"] = kBridgeTolerance;
  r.metrics.emplace("rd_indistinguishable_pairs", 0);
  return r;
}

TheoremResult verify_diagonal(const Theorem& th, const Corpus& c, const VerifyOptions& opt) {
  auto r = run_pairs(th, c, opt, [&](const LabeledPair& p, PairOutcome& o) {
    if (!undirected_only(p, o)) return;
    if (!connected(p)) return o.skip("disconnected graph");
    auto check = [&](const Graph& g, const char* side) {
      const int n = g.n();
      if (n == 0) return;
      const auto pinv = encodings::rpe_pinv(g);
      const auto rd = encodings::rpe_resistance(g);
      double total = 0;
      std::vector<double> row(n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          row[i] += rd.at(i, j, 0);
          total += rd.at(i, j, 0);
        }
      double worst = 0;
      for (int k = 0; k < n; ++k) {
        const double rebuilt = row[k] / n - total / (2.0 * n * n);
        worst = std::max(worst, std::abs(rebuilt - pinv.at(k, k, 0)));
      }
      ++o.checks;
      o.raise("max_abs_error", worst);
      if (!(worst < kDiagonalTolerance)) {
        std::ostringstream why;
        why << side << ": max diagonal error " << worst;
        o.violations.push_back(why.str());
      }
    };
    check(p.a.graph, "a");
    if (!(p.control && p.a.graph == p.b.graph)) check(p.b.graph, "b");
  });
  r.tolerances["max_abs_error"] = kDiagonalTolerance;
  return r;
}

const std::vector<Theorem>& registry() {
  static const std::vector<Theorem> kAll = [] {
    std::vector<Theorem> t;
    auto add = [&t](std::string id, std::string claim, auto fn) { t.push_back({std::move(id), std::move(claim), fn}); };
    add("T3.5", "psi-WL and psi-2-WL agree on every pair for symmetric psi", verify_wl_equals_2wl);
    add("T4.2", "raw APE multisets agree with psi^f-WL and psi^f-2-WL for the pair map f", verify_ape_to_rpe);
    add("T4.4", "on unfeatured pairs, psi-2-WL agrees with the canonical node readout of psi", verify_rpe_to_ape);
    add("EX4.5", "some featured pair is separated by psi-2-WL but not by the canonical node readout",
        verify_featured_gap);
    add("T5.3", "spectral distance WL is at least as strong as kernel WL, and diagonally augmented kernel WL is at "
                "least as strong as distance WL",
        verify_distance_kernel);
    add("C5.4", "RD-WL and pseudoinverse WL agree on every pair", verify_rd_pinv);
    add("T5.7", "(I, L, ..., L^(2n-1))-WL is at least as strong as kernel WL",
        [](const Theorem& th, const Corpus& c, const VerifyOptions& o) {
          return verify_power_stack(th, c, o, "power:laplacian:2n-1", "kernel:", false);
        });
    add("T5.8", "(I, Â, ..., Â^(2n-1))-WL is at least as strong as normalized kernel WL",
        [](const Theorem& th, const Corpus& c, const VerifyOptions& o) {
          return verify_power_stack(th, c, o, "power:sym_norm_adjacency:2n-1", "nkernel:", true);
        });
    add("T5.9", "(I, H(1), ..., H(2n-1))-WL is at least as strong as kernel WL",
        [](const Theorem& th, const Corpus& c, const VerifyOptions& o) {
          return verify_power_stack(th, c, o, "power:heat:2n-1", "kernel:", false);
        });
    add("P5.10", "the six adjacency and Laplacian matrices give the same verdicts as classical WL", verify_matrices);
    add("P5.11", "(D*, A, A^T)-WL is at least as strong as magnetic Laplacian WL", verify_magnetic);
    add("T5.13", "psi-WL is at least as strong as WL for combinatorially aware psi", verify_aware_over_wl);
    add("B-CUT", "RD detects bridges and RD-WL-equivalent connected graphs have isomorphic block cut-edge trees",
        verify_cut_edges);
    add("B-DIAG", "pseudoinverse diagonal equals RD row mean minus half the RD grand mean", verify_diagonal);
    return t;
  }();
  return kAll;
}

std::string upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::not_applicable: return "not_applicable";
  }
  return "unknown";
}

std::vector<std::string> theorem_ids() {
  std::vector<std::string> out;
  for (const auto& t : registry()) out.push_back(t.id);
  return out;
}

std::string canonical_theorem_id(const std::string& id) {
  const std::string u = upper(id);
  for (const auto& t : registry())
    if (u == t.id || u == upper(t.id)) return t.id;
  std::string known;
  for (const auto& t : registry()) known += (known.empty() ? "" : ", ") + t.id;
  throw Error("harness", "unknown theorem id '" + id + "' (known: " + known + ")");
}

TheoremResult verify(const std::string& theorem_id, const Corpus& c, const VerifyOptions& opt) {
  const std::string id = canonical_theorem_id(theorem_id);
  for (const auto& t : registry())
    if (t.id == id) return t.run(t, c, opt);
  throw Error("harness", "unknown theorem id " + id);
}

}  // namespace rpewl::harness
