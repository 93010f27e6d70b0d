#include <algorithm>
#include <cmath>

#include "rpewl/error.hpp"
#include "rpewl/harness.hpp"
#include "rpewl/pe_maps.hpp"
#include "rpewl/spectral.hpp"

namespace rpewl::harness {

namespace {

using namespace encodings;

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

[[noreturn]] void bad(const std::string& spec, const std::string& why) {
  throw Error("harness", "encoding '" + spec + "': " + why);
}

double parse_number(const std::string& spec, const std::string& text) {
  try {
    std::size_t used = 0;
    const auto slash = text.find('/');
    double v = 0;
    if (slash != std::string::npos) {
      const double num = std::stod(text.substr(0, slash), &used);
      if (used != slash) bad(spec, "malformed number " + text);
      const std::string den_text = text.substr(slash + 1);
      const double den = std::stod(den_text, &used);
      if (used != den_text.size() || den == 0) bad(spec, "malformed number " + text);
      v = num / den;
    } else {
      v = std::stod(text, &used);
      if (used != text.size()) bad(spec, "malformed number " + text);
    }
    if (!std::isfinite(v)) bad(spec, "non-finite number " + text);
    return v;
  } catch (const std::logic_error&) {
    bad(spec, "malformed number " + text);
  }
}

std::vector<double> parse_list(const std::string& spec, const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item.empty()) bad(spec, "empty list item");
    out.push_back(parse_number(spec, item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Prefix {
  const char* text;
  AugmentKind kind;
};
constexpr Prefix kPrefixes[] = {
    {"diag+", AugmentKind::diagonal}, {"comb+", AugmentKind::combinatorial}, {"psym+", AugmentKind::pseudosymmetric}};

const Prefix* augmentation_prefix(const std::string& spec) {
  for (const auto& p : kPrefixes)
    if (starts_with(spec, p.text)) return &p;
  return nullptr;
}

int power_order(const std::string& spec, const std::string& text, int n_ref) {
  if (text == "2n-1") return std::max(2 * n_ref - 1, 0);
  const double k = parse_number(spec, text);
  if (k < 0 || k != std::floor(k)) bad(spec, "power must be a nonnegative integer");
  return static_cast<int>(k);
}

}  // namespace

bool is_classical(const std::string& spec) { return spec == "wl" || spec == "classical"; }

bool is_absolute(const std::string& spec) {
  return spec == "degree" || starts_with(spec, "rwse:") || starts_with(spec, "hkdiagse:") ||
         starts_with(spec, "canonical:");
}

RpeTensor compute_rpe(const std::string& spec, const Graph& g, int n_ref) {
  if (n_ref < 0) n_ref = g.n();
  if (const auto* p = augmentation_prefix(spec))
    return augment(compute_rpe(spec.substr(std::string(p->text).size()), g, n_ref), p->kind, g);
  if (starts_with(spec, "pair:")) return pe_maps::ape_to_rpe(compute_ape(spec.substr(5), g));
  for (auto k : {MatrixKind::adjacency, MatrixKind::sym_norm_adjacency, MatrixKind::rw_norm_adjacency,
                 MatrixKind::laplacian, MatrixKind::sym_norm_laplacian, MatrixKind::rw_norm_laplacian})
    if (spec == to_string(k)) return rpe_matrix(g, k);
  if (spec == "spd") return rpe_spd(g);
  if (spec == "resistance" || spec == "rd") return rpe_resistance(g);
  if (spec == "pinv") return rpe_pinv(g);
  if (spec == "directed_stack") return rpe_directed_stack(g);
  if (spec == "eigenproj") return rpe_eigenprojections(g);
  const auto colon = spec.find(':');
  if (colon == std::string::npos) bad(spec, "unknown encoding");
  const std::string head = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (head == "kernel" || head == "distance" || head == "nkernel" || head == "ndistance") {
    const auto form = head.find("kernel") != std::string::npos ? SpectralForm::kernel : SpectralForm::distance;
    const auto base = head[0] == 'n' ? KernelBase::sym_norm_laplacian : KernelBase::laplacian;
    return rpe_spectral(g, spectral::functions::by_name(arg), form, base);
  }
  if (head == "rspe") return rpe_rspe(g, spectral::functions::by_name(arg));
  if (head == "heat") return rpe_heat_kernel(g, parse_list(spec, arg));
  if (head == "magnetic") return rpe_magnetic_laplacian(g, parse_number(spec, arg));
  if (head == "power") {
    const auto colon2 = arg.find(':');
    if (colon2 == std::string::npos) bad(spec, "expected power:BASE:K");
    const std::string base = arg.substr(0, colon2);
    const int k = power_order(spec, arg.substr(colon2 + 1), n_ref);
    if (base == "laplacian") return rpe_power_stack(g, PowerBase::laplacian, k);
    if (base == "adjacency") return rpe_power_stack(g, PowerBase::adjacency, k);
    if (base == "sym_norm_adjacency") return rpe_power_stack(g, PowerBase::sym_norm_adjacency, k);
    if (base == "heat") return rpe_power_stack(g, PowerBase::heat, k);
    if (base == "heat_id") return rpe_power_stack(g, PowerBase::heat, k, HeatChannelZero::identity);
    bad(spec, "unknown power base " + base);
  }
  bad(spec, "unknown encoding");
}

ApeMatrix compute_ape(const std::string& spec, const Graph& g) {
  if (spec == "degree") return ape_compute(g, ApeKind::degree);
  if (starts_with(spec, "rwse:")) return ape_compute(g, ApeKind::rwse, parse_list(spec, spec.substr(5)));
  if (starts_with(spec, "hkdiagse:")) return ape_compute(g, ApeKind::hkdiagse, parse_list(spec, spec.substr(9)));
  if (starts_with(spec, "canonical:")) return pe_maps::rpe_to_ape_canonical(g, compute_rpe(spec.substr(10), g)).ape;
  bad(spec, "unknown absolute encoding");
}

std::pair<RpeTensor, RpeTensor> compute_rpe_pair(const std::string& spec, const Graph& a, const Graph& b) {
  if (const auto* p = augmentation_prefix(spec)) {
    auto [x, y] = compute_rpe_pair(spec.substr(std::string(p->text).size()), a, b);
    return {augment(x, p->kind, a), augment(y, p->kind, b)};
  }
  if (starts_with(spec, "pair:")) {
    auto [x, y] = compute_ape_pair(spec.substr(5), a, b);
    return {pe_maps::ape_to_rpe(x), pe_maps::ape_to_rpe(y)};
  }
  const int n_ref = std::max(a.n(), b.n());
  auto x = compute_rpe(spec, a, n_ref);
  auto y = compute_rpe(spec, b, n_ref);
  if (spec == "eigenproj") {
    const int k = std::max(x.k, y.k);
    x = x.padded(k);
    y = y.padded(k);
  }
  return {std::move(x), std::move(y)};
}

std::pair<ApeMatrix, ApeMatrix> compute_ape_pair(const std::string& spec, const Graph& a, const Graph& b) {
  if (starts_with(spec, "canonical:")) {
    const auto [x, y] = compute_rpe_pair(spec.substr(10), a, b);
    auto [ca, cb] = pe_maps::canonical_pair(a, b, x, y);
    return {std::move(ca.ape), std::move(cb.ape)};
  }
  return {compute_ape(spec, a), compute_ape(spec, b)};
}

refine::Verdict run_test(refine::TestKind test, const std::string& spec, const FeaturedGraph& a,
                         const FeaturedGraph& b, double quant_step) {
  if (quant_step < 0 || !std::isfinite(quant_step)) throw Error("harness", "quantization step must be positive");
  using refine::TestKind;
  if (test == TestKind::classical || is_classical(spec)) {
    if (test == TestKind::raw_ape || test == TestKind::raw_rpe)
      throw Error("harness", "raw tests need an encoding, not classical refinement");
    return refine::compare_classical(a, b);
  }
  if (test == TestKind::raw_ape) {
    if (!is_absolute(spec)) throw Error("harness", "raw_ape needs an absolute encoding, got '" + spec + "'");
    auto [x, y] = compute_ape_pair(spec, a.graph, b.graph);
    if (quant_step > 0) x.quant_step = y.quant_step = quant_step;
    return refine::compare_raw_ape(a, b, x, y);
  }
  const std::string rel = is_absolute(spec) ? "pair:" + spec : spec;
  auto [x, y] = compute_rpe_pair(rel, a.graph, b.graph);
  if (quant_step > 0) x.quant_step = y.quant_step = quant_step;
  switch (test) {
    case TestKind::raw_rpe: return refine::compare_raw_rpe(a, b, x, y);
    case TestKind::psi_wl: return refine::compare_psi_wl(a, b, x, y);
    case TestKind::psi_2wl: return refine::compare_psi_2wl(a, b, x, y);
    default: break;
  }
  throw Error("harness", "unsupported test");
}

}  // namespace rpewl::harness
