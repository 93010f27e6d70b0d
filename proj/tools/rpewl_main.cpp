// rpewl: command-line front end. Exit status 0 = indistinguishable / pass,
// 1 = distinguishable / fail, 2 = usage or computation error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "rpewl/error.hpp"
#include "rpewl/generators.hpp"
#include "rpewl/harness.hpp"
#include "rpewl/refine.hpp"
#include "rpewl/report.hpp"

namespace {

using namespace rpewl;

constexpr int kUsageError = 2;

struct Options {
  int jobs = 0;
  double quant_step = 0;
  std::string output;
  std::string format = "json";

  // gen
  gen::Family family;
  std::uint64_t permute = 0;
  bool permute_set = false;

  // encode / refine / compare
  std::string input;
  int index = 0;
  std::string rpe;
  std::string ape;
  std::string engine;
  std::string test = "psi_wl";
  std::string a, b, pair;
  bool colors = false;

  // dominance / verify / csl
  std::string corpus = "standard";
  std::vector<std::string> encodings;
  std::string theorem;
  std::string verify_encoding = "spd";
  int pair_max_n = 16;
  bool timing = false;
};

void emit(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(o.output);
  if (!out) throw Error("cli", "cannot write " + o.output);
  out << text;
  if (!out) throw Error("cli", "write to " + o.output + " failed");
}

std::string dump(const report::Json& j) { return j.dump(2) + "\n"; }

std::vector<FeaturedGraph> read_all(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cli", "cannot open " + path);
  EdgeListReader reader(in, path);
  std::vector<FeaturedGraph> out;
  FeaturedGraph g;
  while (reader.next(g)) out.push_back(g);
  if (out.empty()) throw Error("cli", path + ": no graph in file");
  return out;
}

FeaturedGraph read_one(const std::string& path, int index) {
  auto all = read_all(path);
  if (index < 0 || index >= static_cast<int>(all.size()))
    throw Error("cli", path + ": graph index " + std::to_string(index) + " out of range (file has " +
                           std::to_string(all.size()) + ")");
  return all[index];
}

int run_gen(const Options& o) {
  auto graphs = gen::generate(o.family);
  if (o.permute_set)
    for (std::size_t i = 0; i < graphs.size(); ++i)
      graphs[i] = apply_permutation(graphs[i], Permutation::random(graphs[i].n(), o.permute + i));
  std::ostringstream out;
  for (const auto& g : graphs) write_edge_list(out, g);
  emit(o, out.str());
  return 0;
}

int run_encode(const Options& o) {
  if (o.rpe.empty() == o.ape.empty()) throw Error("cli", "encode needs exactly one of --rpe or --ape");
  const auto g = read_one(o.input, o.index);
  if (!o.rpe.empty()) {
    auto psi = harness::compute_rpe(o.rpe, g.graph);
    if (o.quant_step > 0) psi.quant_step = o.quant_step;
    emit(o, dump(report::rpe(psi)));
  } else {
    auto phi = harness::compute_ape(o.ape, g.graph);
    if (o.quant_step > 0) phi.quant_step = o.quant_step;
    emit(o, dump(report::ape(phi)));
  }
  return 0;
}

int run_refine(const Options& o) {
  const auto g = read_one(o.input, o.index);
  refine::ColorHistory h;
  if (o.engine == "wl" || o.engine == "classical") {
    if (!o.rpe.empty()) throw Error("cli", "classical refinement takes no --rpe");
    h = refine::wl_classical(g);
  } else if (o.engine == "psi_wl" || o.engine == "psi_2wl") {
    if (o.rpe.empty()) throw Error("cli", o.engine + " needs --rpe");
    const std::string spec = harness::is_absolute(o.rpe) ? "pair:" + o.rpe : o.rpe;
    auto psi = harness::compute_rpe(spec, g.graph);
    if (o.quant_step > 0) psi.quant_step = o.quant_step;
    h = o.engine == "psi_wl" ? refine::rpe_aug_wl(g, psi) : refine::rpe_2_wl(g, psi);
  } else {
    throw Error("cli", "unknown engine '" + o.engine + "' (wl, psi_wl, psi_2wl)");
  }
  emit(o, dump(report::history(h, o.colors)));
  return 0;
}

int run_compare(const Options& o) {
  FeaturedGraph a, b;
  if (!o.pair.empty()) {
    if (!o.a.empty() || !o.b.empty()) throw Error("cli", "use either --pair or -a/-b");
    const auto all = read_all(o.pair);
    if (all.size() != 2) throw Error("cli", o.pair + ": --pair needs exactly two graphs");
    a = all[0];
    b = all[1];
  } else {
    if (o.a.empty() || o.b.empty()) throw Error("cli", "compare needs -a and -b, or --pair");
    a = read_one(o.a, 0);
    b = read_one(o.b, 0);
  }
  const auto test = refine::test_kind_from_string(o.test);
  if (!o.rpe.empty() && !o.ape.empty()) throw Error("cli", "give --rpe or --ape, not both");
  std::string spec = !o.rpe.empty() ? o.rpe : o.ape;
  if (test == refine::TestKind::classical) {
    if (!spec.empty()) throw Error("cli", "the classical test takes no encoding");
    spec = "wl";
  } else if (spec.empty()) {
    throw Error("cli", to_string(test) + " needs --rpe or --ape");
  }
  const auto v = harness::run_test(test, spec, a, b, o.quant_step);
  emit(o, dump(report::verdict(v, spec)));
  return v.distinguishable ? 1 : 0;
}

int run_dominance(const Options& o) {
  if (o.encodings.size() < 2) throw Error("cli", "dominance needs at least two --encoding values");
  const auto engine = refine::test_kind_from_string(o.engine.empty() ? "psi_wl" : o.engine);
  const auto c = harness::build_corpus(o.corpus);
  const auto r = harness::dominance_matrix(c, o.encodings, engine, o.jobs);
  emit(o, o.format == "csv" ? report::dominance_csv(r) : dump(report::dominance(r)));
  for (const auto& f : r.failures) std::cerr << "rpewl: skipped " << f.pair_id << " (" << f.encoding << "): " << f.message << "\n";
  return 0;
}

int run_verify(const Options& o) {
  harness::VerifyOptions vo;
  vo.jobs = o.jobs;
  vo.encoding = o.verify_encoding;
  vo.pair_engine_max_n = o.pair_max_n;
  const auto id = harness::canonical_theorem_id(o.theorem);
  const auto c = harness::build_corpus(o.corpus);
  const auto r = harness::verify(id, c, vo);
  emit(o, dump(report::theorem(r, vo)));
  return r.status == harness::Status::pass ? 0 : 1;
}

int run_csl(const Options& o) {
  const auto rows = harness::csl_experiment(o.jobs);
  emit(o, o.format == "csv" ? report::csl_csv(rows, o.timing) : dump(report::csl(rows, o.timing)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Relative positional encodings and Weisfeiler-Lehman refinement"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&o](CLI::App* s, bool format) {
    s->add_option("-o,--output", o.output, "Output path (default stdout)")->envname("RPEWL_OUTPUT");
    s->add_option("--jobs", o.jobs, "Worker threads, 0 = all cores")->envname("RPEWL_JOBS")->check(CLI::NonNegativeNumber);
    s->add_option("--quant-step", o.quant_step, "Override the encoding tokenization step")
        ->envname("RPEWL_QUANT_STEP")
        ->check(CLI::PositiveNumber);
    if (format)
      s->add_option("--format", o.format, "json or csv")->envname("RPEWL_FORMAT")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* gen_cmd = app.add_subcommand("gen", "Generate graphs as edge lists");
  gen_cmd->add_option("--family", o.family.name, "Graph family")
      ->required()
      ->envname("RPEWL_FAMILY")
      ->check(CLI::IsMember(gen::family_names()));
  gen_cmd->add_option("--n", o.family.n, "Order (leaves for star)")->envname("RPEWL_N");
  gen_cmd->add_option("--skip", o.family.skip, "CSL skip")->envname("RPEWL_SKIP");
  gen_cmd->add_option("--p", o.family.p, "Edge probability for gnp")->envname("RPEWL_P");
  gen_cmd->add_option("--seed", o.family.seed, "Seed for gnp")->envname("RPEWL_SEED");
  auto* permute_opt = gen_cmd->add_option("--permute", o.permute, "Relabel vertices with this seed")->envname("RPEWL_PERMUTE");
  common(gen_cmd, false);

  auto* enc_cmd = app.add_subcommand("encode", "Compute an encoding as JSON");
  enc_cmd->add_option("--rpe", o.rpe, "Relative encoding spec")->envname("RPEWL_RPE");
  enc_cmd->add_option("--ape", o.ape, "Absolute encoding spec")->envname("RPEWL_APE");
  enc_cmd->add_option("-i,--input", o.input, "Edge-list file")->required()->envname("RPEWL_INPUT");
  enc_cmd->add_option("--index", o.index, "Graph index within the file")->envname("RPEWL_INDEX");
  common(enc_cmd, false);

  auto* ref_cmd = app.add_subcommand("refine", "Run a refinement engine and print the color history");
  ref_cmd->add_option("--engine", o.engine, "wl, psi_wl or psi_2wl")->required()->envname("RPEWL_ENGINE");
  ref_cmd->add_option("--rpe", o.rpe, "Encoding for psi engines")->envname("RPEWL_RPE");
  ref_cmd->add_option("-i,--input", o.input, "Edge-list file")->required()->envname("RPEWL_INPUT");
  ref_cmd->add_option("--index", o.index, "Graph index within the file")->envname("RPEWL_INDEX");
  ref_cmd->add_flag("--colors", o.colors, "Include every color")->envname("RPEWL_COLORS");
  common(ref_cmd, false);

  auto* cmp_cmd = app.add_subcommand("compare", "Compare two graphs; exit 1 when distinguishable");
  cmp_cmd->add_option("--test", o.test, "raw_ape, raw_rpe, psi_wl, psi_2wl or classical")->envname("RPEWL_TEST");
  cmp_cmd->add_option("--rpe", o.rpe, "Relative encoding spec")->envname("RPEWL_RPE");
  cmp_cmd->add_option("--ape", o.ape, "Absolute encoding spec")->envname("RPEWL_APE");
  cmp_cmd->add_option("-a", o.a, "First edge-list file")->envname("RPEWL_A");
  cmp_cmd->add_option("-b", o.b, "Second edge-list file")->envname("RPEWL_B");
  cmp_cmd->add_option("--pair", o.pair, "File holding both graphs")->envname("RPEWL_PAIR");
  common(cmp_cmd, false);

  auto* dom_cmd = app.add_subcommand("dominance", "Encoding-vs-encoding verdict grid over a corpus");
  dom_cmd->add_option("--corpus", o.corpus, "Corpus spec")->envname("RPEWL_CORPUS");
  dom_cmd->add_option("--encoding", o.encodings, "Encoding spec (repeat)")->required()->envname("RPEWL_ENCODINGS")
      ->delimiter(';');
  dom_cmd->add_option("--engine", o.engine, "psi_wl or psi_2wl")->envname("RPEWL_ENGINE");
  common(dom_cmd, true);

  auto* ver_cmd = app.add_subcommand("verify", "Check one theorem-level claim on a corpus");
  ver_cmd->add_option("--theorem", o.theorem, "Claim id")->required()->envname("RPEWL_THEOREM");
  ver_cmd->add_option("--corpus", o.corpus, "Corpus spec")->envname("RPEWL_CORPUS");
  ver_cmd->add_option("--encoding", o.verify_encoding, "Encoding for T5.13")->envname("RPEWL_ENCODING");
  ver_cmd->add_option("--pair-max-n", o.pair_max_n, "Largest order given to the pair engine")
      ->envname("RPEWL_PAIR_MAX_N")
      ->check(CLI::Range(1, refine::kPairEngineLimit));
  common(ver_cmd, false);

  auto* csl_cmd = app.add_subcommand("csl", "CSL(41) pair-distinguishability table");
  csl_cmd->add_flag("--timing", o.timing, "Include per-encoding seconds")->envname("RPEWL_TIMING");
  common(csl_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }
  o.permute_set = permute_opt->count() > 0;

  try {
    if (*gen_cmd) return run_gen(o);
    if (*enc_cmd) return run_encode(o);
    if (*ref_cmd) return run_refine(o);
    if (*cmp_cmd) return run_compare(o);
    if (*dom_cmd) return run_dominance(o);
    if (*ver_cmd) return run_verify(o);
    if (*csl_cmd) return run_csl(o);
  } catch (const std::exception& e) {
    std::cerr << "rpewl: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
