#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpewl/encodings.hpp"
#include "rpewl/graph.hpp"
#include "rpewl/refine.hpp"

namespace rpewl::harness {

inline constexpr int kCslN = 41;
inline const std::vector<int> kCslSkips = {2, 3, 4, 5, 6, 9, 11, 12, 13, 16};
/// Spectral functions used by every kernel-family verifier.
inline const std::vector<std::string> kKernelFunctions = {"inv", "exp", "exp2", "sq"};

struct LabeledPair {
  std::string id;
  FeaturedGraph a, b;
  std::string note;
  /// Feature-isomorphic by construction.
  bool control = false;
};

struct Corpus {
  std::string name;
  std::vector<LabeledPair> pairs;
};

// Corpus grammar: term ('+' term)*, where term is one of
//   standard | csl | random(n_max, count[, seed=S]) |
//   random_directed(n_max, count[, seed=S]) | wl_pairs(n_max, count[, seed=S]) |
//   file(path)
Corpus build_corpus(const std::string& spec);
Corpus standard_corpus();
Corpus csl_corpus();
/// Connected G(n, p) graphs, each paired with a degree-preserving rewiring.
Corpus random_corpus(int n_max, int count, std::uint64_t seed);
/// Random digraphs, each paired with a copy with some arcs reversed, relabeled.
Corpus random_directed_corpus(int n_max, int count, std::uint64_t seed);
/// Non-isomorphic regular graphs of equal order and degree.
Corpus wl_pairs_corpus(int n_max, int count, std::uint64_t seed);
/// Consecutive graphs of a multi-graph edge-list file form the pairs.
Corpus file_corpus(const std::string& path);
Corpus filter(const Corpus& c, const std::function<bool(const LabeledPair&)>& keep, const std::string& suffix);

// Encoding grammar. Relative encodings:
//   adjacency | sym_norm_adjacency | rw_norm_adjacency | laplacian |
//   sym_norm_laplacian | rw_norm_laplacian | spd | resistance | rd | pinv |
//   kernel:F | distance:F | nkernel:F | ndistance:F | rspe:F | heat:T[,T...] |
//   power:BASE:K (BASE laplacian|adjacency|sym_norm_adjacency|heat|heat_id,
//   K an integer or 2n-1) | magnetic:ALPHA | directed_stack | eigenproj |
//   pair:APE | diag+R | comb+R | psym+R
// Absolute encodings: degree | rwse:T[,T...] | hkdiagse:T[,T...] | canonical:R
// The pseudo-encoding "wl" selects classical refinement.
bool is_absolute(const std::string& spec);
bool is_classical(const std::string& spec);
/// `n_ref` resolves "2n-1"; negative means the graph's own order.
RpeTensor compute_rpe(const std::string& spec, const Graph& g, int n_ref = -1);
ApeMatrix compute_ape(const std::string& spec, const Graph& g);
/// Both sides of a pair: resolves 2n-1 with the larger order, pads
/// eigenprojections to a common channel count, aligns canonical depths.
std::pair<RpeTensor, RpeTensor> compute_rpe_pair(const std::string& spec, const Graph& a, const Graph& b);
std::pair<ApeMatrix, ApeMatrix> compute_ape_pair(const std::string& spec, const Graph& a, const Graph& b);

/// Runs `test` with encoding `spec` on a pair. raw_ape needs an absolute
/// encoding; the other encoded tests convert absolute encodings with pair:.
/// A positive `quant_step` replaces the encoding's tokenization step.
refine::Verdict run_test(refine::TestKind test, const std::string& spec, const FeaturedGraph& a,
                         const FeaturedGraph& b, double quant_step = 0);

/// Calls fn(i) for i in [0, count) on up to `jobs` threads (0 = all cores).
/// The first exception is rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);
int default_jobs();

struct DominanceCell {
  int both = 0;
  int neither = 0;
  int only_first = 0;
  int only_second = 0;
  /// Pairs where either encoding failed to compute.
  int skipped = 0;
  std::vector<std::string> only_first_pairs;
  std::vector<std::string> only_second_pairs;
};

struct PairFailure {
  std::string pair_id;
  std::string encoding;
  std::string message;
};

struct DominanceReport {
  std::string corpus;
  refine::TestKind engine = refine::TestKind::psi_wl;
  std::vector<std::string> encodings;
  std::vector<std::string> pair_ids;
  /// verdicts[e][p]; empty when the computation failed.
  std::vector<std::vector<std::optional<bool>>> verdicts;
  /// cells[i][j] compares encodings i and j.
  std::vector<std::vector<DominanceCell>> cells;
  std::vector<PairFailure> failures;
  bool flagged() const noexcept { return !failures.empty(); }
  /// (i, j): nothing in the corpus separated by j but not by i.
  std::vector<std::pair<int, int>> dominance_edges() const;
};

DominanceReport dominance_matrix(const Corpus& c, const std::vector<std::string>& encodings, refine::TestKind engine,
                                 int jobs = 0);

enum class Status { pass, fail, not_applicable };
std::string to_string(Status s);

struct Violation {
  std::string pair_id;
  std::string detail;
};

struct TheoremResult {
  std::string id;
  std::string claim;
  std::string corpus;
  Status status = Status::not_applicable;
  int eligible = 0;
  int checks = 0;
  std::vector<Violation> violations;
  /// Pairs outside the hypothesis, with the reason.
  std::vector<Violation> not_applicable;
  std::map<std::string, double> tolerances;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
};

struct VerifyOptions {
  int jobs = 0;
  /// Encoding for verifiers that take one (T5.13).
  std::string encoding = "spd";
  /// Largest order passed to the pair engine.
  int pair_engine_max_n = 16;
};

std::vector<std::string> theorem_ids();
/// Also accepts aliases such as "thm3.5" or "cor5.4".
std::string canonical_theorem_id(const std::string& id);
TheoremResult verify(const std::string& theorem_id, const Corpus& c, const VerifyOptions& opt = {});

struct CslRow {
  std::string encoding;
  int distinguished = 0;
  int total = 0;
  std::vector<std::string> missed;
  double seconds = 0;
};

std::vector<std::string> csl_encodings();
std::vector<CslRow> csl_experiment(int jobs = 0);

/// Nodes of both histories are comparable at the returned round: it is past
/// both stable rounds and the partition of the combined node set is stable
/// there. Both histories need enough rounds; returns -1 otherwise.
int joint_stable_round(const refine::ColorHistory& a, const refine::ColorHistory& b);

/// Smallest connected pair, in (n, edge mask) order over labeled graphs with
/// at most `n_max` vertices, equal under shortest-path refinement and
/// separated by resistance refinement.
std::optional<std::pair<Graph, Graph>> find_cutvertex_pair(int n_max = 6);

struct AwarenessWitness {
  Graph graph;
  Arc edge;
  Arc non_edge;
  double value = 0;
};

/// First connected labeled graph with at most `n_max` vertices in which an
/// edge and a non-edge carry the same token under `spec`.
std::optional<AwarenessWitness> find_awareness_counterexample(const std::string& spec, int n_max = 5);
/// Token condition: within the union of both graphs, equal tokens imply equal
/// adjacency status.
bool combinatorially_aware_on(const RpeTensor& pa, const Graph& a, const RpeTensor& pb, const Graph& b);

}  // namespace rpewl::harness
