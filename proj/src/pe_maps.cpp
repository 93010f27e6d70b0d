#include "rpewl/pe_maps.hpp"

#include "rpewl/color.hpp"
#include "rpewl/error.hpp"
#include "rpewl/refine.hpp"

namespace rpewl::pe_maps {

namespace {

constexpr std::uint8_t kPairToken = 0x21;
constexpr std::uint8_t kCanonical = 0x22;

RpeTensor prepared(const Graph& g, const RpeTensor& psi, bool& augmented) {
  if (psi.n != g.n()) throw Error("pe_maps", "encoding size does not match graph size");
  augmented = !psi.diagonally_aware;
  return augmented ? encodings::augment(psi, encodings::AugmentKind::diagonal, g) : psi;
}

void append(std::vector<std::uint8_t>& buf, const ColorId& c) { buf.insert(buf.end(), c.bytes.begin(), c.bytes.end()); }

}  // namespace

RpeTensor ape_to_rpe(const ApeMatrix& phi) {
  const auto t = tokenize(phi);
  const int n = phi.n;
  RpeTensor out(n, 1, "pair:" + phi.name, kExactQuantStep);
  for (int u = 0; u < n; ++u)
    for (int v = u; v < n; ++v) {
      std::span<const Token> a(t.row(u), t.l), b(t.row(v), t.l);
      if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end())) std::swap(a, b);
      const double tok = ColorHasher(kPairToken).add(a).add(b).finish().as_token();
      out.values[static_cast<std::size_t>(u) * n + v] = tok;
      out.values[static_cast<std::size_t>(v) * n + u] = tok;
    }
  return out;
}

int canonical_depth(const Graph& g, const RpeTensor& psi) {
  bool augmented = false;
  return refine::rpe_2_wl(FeaturedGraph(g), prepared(g, psi, augmented)).stable_round;
}

CanonicalApe rpe_to_ape_canonical(const Graph& g, const RpeTensor& psi, int depth) {
  CanonicalApe out;
  const auto psi2 = prepared(g, psi, out.augmented);
  refine::EngineOptions opt;
  opt.min_rounds = std::max(depth, 0);
  const auto h = refine::rpe_2_wl(FeaturedGraph(g), psi2, opt);
  out.depth = depth < 0 ? h.stable_round : depth;
  const int n = g.n();
  const auto& chi = h.rounds.at(out.depth);
  out.ape = ApeMatrix(n, 1, "canonical:" + psi.name, kExactQuantStep);
  std::vector<std::uint8_t> row, col;
  for (int v = 0; v < n; ++v) {
    row.clear();
    col.clear();
    for (int w = 0; w < n; ++w) {
      append(row, chi[static_cast<std::size_t>(v) * n + w]);
      append(col, chi[static_cast<std::size_t>(w) * n + v]);
    }
    out.ape.values[v] = ColorHasher(kCanonical)
                            .add(chi[static_cast<std::size_t>(v) * n + v])
                            .add_multiset(row, 16)
                            .add_multiset(col, 16)
                            .finish()
                            .as_token();
  }
  return out;
}

std::pair<CanonicalApe, CanonicalApe> canonical_pair(const Graph& a, const Graph& b, const RpeTensor& psi_a,
                                                     const RpeTensor& psi_b) {
  const int depth = std::max(canonical_depth(a, psi_a), canonical_depth(b, psi_b));
  return {rpe_to_ape_canonical(a, psi_a, depth), rpe_to_ape_canonical(b, psi_b, depth)};
}

}  // namespace rpewl::pe_maps
