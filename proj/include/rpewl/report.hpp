#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rpewl/encodings.hpp"
#include "rpewl/harness.hpp"
#include "rpewl/refine.hpp"

namespace rpewl::report {

inline constexpr const char* kSchemaVersion = "rpewl-report/1";

using Json = nlohmann::ordered_json;

// Every document starts with "schema" and "kind"; layouts are in docs/formats.md.
Json verdict(const refine::Verdict& v, const std::string& encoding);
/// Per-round class counts and digests; `colors` adds every color.
Json history(const refine::ColorHistory& h, bool colors = false);
Json rpe(const RpeTensor& psi);
Json ape(const ApeMatrix& phi);
Json dominance(const harness::DominanceReport& r);
Json theorem(const harness::TheoremResult& r, const harness::VerifyOptions& opt);
/// Timings vary run to run, so they are opt-in.
Json csl(const std::vector<harness::CslRow>& rows, bool timing = false);

/// One row per (first, second) encoding pair.
std::string dominance_csv(const harness::DominanceReport& r);
std::string csl_csv(const std::vector<harness::CslRow>& rows, bool timing = false);

}  // namespace rpewl::report
