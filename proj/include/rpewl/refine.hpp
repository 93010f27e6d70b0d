#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpewl/color.hpp"
#include "rpewl/encodings.hpp"
#include "rpewl/graph.hpp"

namespace rpewl::refine {

inline constexpr int kPairEngineLimit = 64;

// Per-round colorings. Node engines store one color per vertex; the pair
// engine stores one per ordered pair at index u * n + v.
struct ColorHistory {
  int n = 0;
  bool pairs = false;
  std::vector<std::vector<ColorId>> rounds;
  /// First round whose partition equals the previous one.
  int stable_round = 0;

  int last_round() const noexcept { return static_cast<int>(rounds.size()) - 1; }
  std::size_t class_count(int round) const;
  ColorId digest(int round) const;
  /// Class id per element at `round`, numbered by first appearance.
  std::vector<int> partition(int round) const;
};

struct EngineOptions {
  /// Keep iterating at least this many rounds, even after stabilizing.
  int min_rounds = 0;
  double feature_step = kSpectralQuantStep;
};

ColorHistory wl_classical(const FeaturedGraph& g, const EngineOptions& opt = {});
ColorHistory rpe_aug_wl(const FeaturedGraph& g, const RpeTensor& psi, const EngineOptions& opt = {});
ColorHistory rpe_2_wl(const FeaturedGraph& g, const RpeTensor& psi, const EngineOptions& opt = {});

enum class TestKind { raw_ape, raw_rpe, psi_wl, psi_2wl, classical };
std::string to_string(TestKind kind);
TestKind test_kind_from_string(const std::string& s);

struct Verdict {
  TestKind test = TestKind::classical;
  bool distinguishable = false;
  std::optional<int> separating_round;
  std::vector<ColorId> digests_a;
  std::vector<ColorId> digests_b;
  int stable_a = 0;
  int stable_b = 0;
};

// Refinement comparisons run both graphs to a common depth past both stable
// rounds and compare the per-round color histograms.
Verdict compare_classical(const FeaturedGraph& a, const FeaturedGraph& b, const EngineOptions& opt = {});
Verdict compare_psi_wl(const FeaturedGraph& a, const FeaturedGraph& b, const RpeTensor& psi_a, const RpeTensor& psi_b,
                       const EngineOptions& opt = {});
Verdict compare_psi_2wl(const FeaturedGraph& a, const FeaturedGraph& b, const RpeTensor& psi_a,
                        const RpeTensor& psi_b, const EngineOptions& opt = {});
/// Multiset of (feature row, φ row) per node.
Verdict compare_raw_ape(const FeaturedGraph& a, const FeaturedGraph& b, const ApeMatrix& phi_a, const ApeMatrix& phi_b,
                        const EngineOptions& opt = {});
/// Multiset of (X(u), X(v), ψ(u, v)) over ordered pairs.
Verdict compare_raw_rpe(const FeaturedGraph& a, const FeaturedGraph& b, const RpeTensor& psi_a,
                        const RpeTensor& psi_b, const EngineOptions& opt = {});

/// {(x, y) : x, y in m} as a sorted multiset.
template <class T>
std::vector<std::pair<T, T>> multiset_square(const std::vector<T>& m) {
  std::vector<std::pair<T, T>> out;
  out.reserve(m.size() * m.size());
  for (const auto& x : m)
    for (const auto& y : m) out.emplace_back(x, y);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rpewl::refine
