#include "rpewl/report.hpp"

#include <sstream>

namespace rpewl::report {

namespace {

Json header(const char* kind) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

Json hex_list(const std::vector<ColorId>& ids) {
  Json out = Json::array();
  for (const auto& c : ids) out.push_back(c.hex());
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ";") + x;
  return out;
}

Json violations(const std::vector<harness::Violation>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back({{"pair", v.pair_id}, {"detail", v.detail}});
  return out;
}

}  // namespace

Json verdict(const refine::Verdict& v, const std::string& encoding) {
  Json j = header("verdict");
  j["test"] = refine::to_string(v.test);
  j["encoding"] = encoding;
  j["distinguishable"] = v.distinguishable;
  j["separating_round"] = v.separating_round ? Json(*v.separating_round) : Json(nullptr);
  j["stable_round_a"] = v.stable_a;
  j["stable_round_b"] = v.stable_b;
  j["digests_a"] = hex_list(v.digests_a);
  j["digests_b"] = hex_list(v.digests_b);
  return j;
}

Json history(const refine::ColorHistory& h, bool colors) {
  Json j = header("history");
  j["n"] = h.n;
  j["pairs"] = h.pairs;
  j["stable_round"] = h.stable_round;
  Json rounds = Json::array();
  for (int t = 0; t <= h.last_round(); ++t) {
    Json r;
    r["round"] = t;
    r["classes"] = h.class_count(t);
    r["digest"] = h.digest(t).hex();
    r["partition"] = h.partition(t);
    if (colors) r["colors"] = hex_list(h.rounds[t]);
    rounds.push_back(std::move(r));
  }
  j["rounds"] = std::move(rounds);
  return j;
}

Json rpe(const RpeTensor& psi) {
  Json j = header("rpe");
  j["name"] = psi.name;
  j["n"] = psi.n;
  j["channels"] = psi.k;
  j["quant_step"] = psi.quant_step;
  j["diagonally_aware"] = psi.diagonally_aware;
  Json chans = Json::array();
  for (int c = 0; c < psi.k; ++c) {
    Json rows = Json::array();
    for (int u = 0; u < psi.n; ++u) {
      Json row = Json::array();
      for (int v = 0; v < psi.n; ++v) row.push_back(psi.at(u, v, c));
      rows.push_back(std::move(row));
    }
    chans.push_back(std::move(rows));
  }
  j["values"] = std::move(chans);
  return j;
}

Json ape(const ApeMatrix& phi) {
  Json j = header("ape");
  j["name"] = phi.name;
  j["n"] = phi.n;
  j["columns"] = phi.l;
  j["quant_step"] = phi.quant_step;
  Json rows = Json::array();
  for (int v = 0; v < phi.n; ++v) {
    Json row = Json::array();
    for (int c = 0; c < phi.l; ++c) row.push_back(phi.at(v, c));
    rows.push_back(std::move(row));
  }
  j["values"] = std::move(rows);
  return j;
}

Json dominance(const harness::DominanceReport& r) {
  Json j = header("dominance");
  j["corpus"] = r.corpus;
  j["engine"] = refine::to_string(r.engine);
  j["encodings"] = r.encodings;
  j["pairs"] = r.pair_ids;
  j["flagged"] = r.flagged();
  Json verdicts = Json::object();
  for (std::size_t e = 0; e < r.encodings.size(); ++e) {
    Json col = Json::array();
    for (const auto& v : r.verdicts[e]) col.push_back(v ? Json(*v) : Json(nullptr));
    verdicts[r.encodings[e]] = std::move(col);
  }
  j["verdicts"] = std::move(verdicts);
  Json cells = Json::array();
  for (std::size_t a = 0; a < r.encodings.size(); ++a)
    for (std::size_t b = 0; b < r.encodings.size(); ++b) {
      if (a == b) continue;
      const auto& c = r.cells[a][b];
      cells.push_back({{"first", r.encodings[a]},
                       {"second", r.encodings[b]},
                       {"both", c.both},
                       {"neither", c.neither},
                       {"only_first", c.only_first},
                       {"only_second", c.only_second},
                       {"skipped", c.skipped},
                       {"only_first_pairs", c.only_first_pairs},
                       {"only_second_pairs", c.only_second_pairs}});
    }
  j["cells"] = std::move(cells);
  Json edges = Json::array();
  for (const auto& [a, b] : r.dominance_edges())
    edges.push_back({{"stronger", r.encodings[a]}, {"weaker", r.encodings[b]}});
  j["at_least_as_strong"] = std::move(edges);
  Json failures = Json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"pair", f.pair_id}, {"encoding", f.encoding}, {"message", f.message}});
  j["failures"] = std::move(failures);
  return j;
}

Json theorem(const harness::TheoremResult& r, const harness::VerifyOptions& opt) {
  Json j = header("theorem");
  j["id"] = r.id;
  j["claim"] = r.claim;
  j["label"] = "consistent with " + r.id + " on this corpus";
  j["corpus"] = r.corpus;
  j["status"] = harness::to_string(r.status);
  j["eligible_pairs"] = r.eligible;
  j["checks"] = r.checks;
  j["options"] = {{"encoding", opt.encoding}, {"pair_engine_max_n", opt.pair_engine_max_n}};
  j["tolerances"] = r.tolerances;
  j["metrics"] = r.metrics;
  j["violations"] = violations(r.violations);
  j["not_applicable"] = violations(r.not_applicable);
  j["notes"] = r.notes;
  return j;
}

Json csl(const std::vector<harness::CslRow>& rows, bool timing) {
  Json j = header("csl");
  j["n"] = harness::kCslN;
  j["skips"] = harness::kCslSkips;
  j["engine"] = "psi_wl";
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row = {{"encoding", r.encoding}, {"distinguished", r.distinguished}, {"total", r.total}, {"missed", r.missed}};
    if (timing) row["seconds"] = r.seconds;
    out.push_back(std::move(row));
  }
  j["rows"] = std::move(out);
  return j;
}

std::string dominance_csv(const harness::DominanceReport& r) {
  std::ostringstream out;
  out << "first,second,both,neither,only_first,only_second,skipped,only_second_pairs\n";
  for (std::size_t a = 0; a < r.encodings.size(); ++a)
    for (std::size_t b = 0; b < r.encodings.size(); ++b) {
      if (a == b) continue;
      const auto& c = r.cells[a][b];
      out << csv_field(r.encodings[a]) << ',' << csv_field(r.encodings[b]) << ',' << c.both << ',' << c.neither << ','
          << c.only_first << ',' << c.only_second << ',' << c.skipped << ',' << csv_field(join(c.only_second_pairs))
          << '\n';
    }
  return out.str();
}

std::string csl_csv(const std::vector<harness::CslRow>& rows, bool timing) {
  std::ostringstream out;
  out << "encoding,distinguished,total,missed" << (timing ? ",seconds" : "") << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.encoding) << ',' << r.distinguished << ',' << r.total << ',' << csv_field(join(r.missed));
    if (timing) out << ',' << r.seconds;
    out << '\n';
  }
  return out.str();
}

}  // namespace rpewl::report
