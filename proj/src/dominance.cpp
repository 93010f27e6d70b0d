#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "rpewl/error.hpp"
#include "rpewl/harness.hpp"

namespace rpewl::harness {

int default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 0) jobs = default_jobs();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first;
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      if (stop.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

namespace {

// Comparability of these two is unsettled; one-sided wins are reported but no edge is drawn.
bool open_comparison(const std::string& x, const std::string& y) {
  auto rd = [](const std::string& s) { return s == "resistance" || s == "rd"; };
  return (x == "spd" && rd(y)) || (rd(x) && y == "spd");
}

}  // namespace

std::vector<std::pair<int, int>> DominanceReport::dominance_edges() const {
  std::vector<std::pair<int, int>> out;
  const int e = static_cast<int>(encodings.size());
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < e; ++j) {
      const auto& cell = cells[i][j];
      if (i == j || cell.only_second != 0 || cell.skipped != 0) continue;
      if (open_comparison(encodings[i], encodings[j])) continue;
      out.emplace_back(i, j);
    }
  return out;
}

DominanceReport dominance_matrix(const Corpus& c, const std::vector<std::string>& encodings, refine::TestKind engine,
                                 int jobs) {
  if (engine != refine::TestKind::psi_wl && engine != refine::TestKind::psi_2wl &&
      engine != refine::TestKind::classical)
    throw Error("harness", "dominance engine must be psi_wl or psi_2wl");
  DominanceReport r;
  r.corpus = c.name;
  r.engine = engine;
  r.encodings = encodings;
  const std::size_t ne = encodings.size(), np = c.pairs.size();
  for (const auto& p : c.pairs) r.pair_ids.push_back(p.id);
  r.verdicts.assign(ne, std::vector<std::optional<bool>>(np));
  std::vector<std::string> errors(ne * np);
  parallel_for(ne * np, jobs, [&](std::size_t job) {
    const std::size_t e = job / np, p = job % np;
    const auto& pair = c.pairs[p];
    try {
      r.verdicts[e][p] = run_test(engine, encodings[e], pair.a, pair.b).distinguishable;
    } catch (const std::exception& ex) {
      errors[job] = ex.what();
      if (errors[job].empty()) errors[job] = "unknown error";
    }
  });
  for (std::size_t e = 0; e < ne; ++e)
    for (std::size_t p = 0; p < np; ++p)
      if (!errors[e * np + p].empty()) r.failures.push_back({c.pairs[p].id, encodings[e], errors[e * np + p]});
  r.cells.assign(ne, std::vector<DominanceCell>(ne));
  for (std::size_t i = 0; i < ne; ++i)
    for (std::size_t j = 0; j < ne; ++j) {
      auto& cell = r.cells[i][j];
      for (std::size_t p = 0; p < np; ++p) {
        const auto& x = r.verdicts[i][p];
        const auto& y = r.verdicts[j][p];
        if (!x || !y) ++cell.skipped;
        else if (*x && *y) ++cell.both;
        else if (!*x && !*y) ++cell.neither;
        else if (*x) {
          ++cell.only_first;
          cell.only_first_pairs.push_back(c.pairs[p].id);
        } else {
          ++cell.only_second;
          cell.only_second_pairs.push_back(c.pairs[p].id);
        }
      }
    }
  return r;
}

}  // namespace rpewl::harness
