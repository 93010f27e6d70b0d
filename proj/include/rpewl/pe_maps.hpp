#pragma once

#include "rpewl/encodings.hpp"
#include "rpewl/graph.hpp"

namespace rpewl::pe_maps {

/// ψ(u, v) = hash of the sorted pair of φ rows. Single channel, step 1.
RpeTensor ape_to_rpe(const ApeMatrix& phi);

struct CanonicalApe {
  ApeMatrix ape;
  /// Pair refinement rounds the readout was taken at.
  int depth = 0;
  /// Set when ψ was not diagonally aware and an identity channel was stacked.
  bool augmented = false;
};

/// Stable pair-refinement round of the unfeatured graph under ψ, after the
/// automatic diagonal augmentation.
int canonical_depth(const Graph& g, const RpeTensor& psi);

/// Per node: hash of (χ(v, v), {χ(v, w)}, {χ(w, v)}) at `depth` rounds of
/// pair refinement on the unfeatured graph. A negative depth means the
/// graph's own stable round. Readouts of two graphs are comparable only when
/// taken at the same depth.
CanonicalApe rpe_to_ape_canonical(const Graph& g, const RpeTensor& psi, int depth = -1);

/// Canonical encodings of two graphs at their common depth.
std::pair<CanonicalApe, CanonicalApe> canonical_pair(const Graph& a, const Graph& b, const RpeTensor& psi_a,
                                                     const RpeTensor& psi_b);

}  // namespace rpewl::pe_maps
