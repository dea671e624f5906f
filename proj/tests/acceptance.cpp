// Copyright 2026 The permcount Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "oracles.hpp"
#include "permcount/permcount.hpp"

namespace {

using namespace permcount;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

Outcome exhaustive_unbiasedness() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int graphs = 0;
  for (int n = 1; n <= 3; ++n) {
    for (unsigned bits = 0; bits < (1u << (n * n)); ++bits) {
      const auto rows = oracle::pattern(n, bits);
      const auto truth = static_cast<double>(oracle::permanent(rows));
      if (truth == 0) {
        continue;
      }
      ++graphs;
      const auto g = from_dense_rows(rows);
      for (WeightMode mode : {WeightMode::uniform, WeightMode::scaled}) {
        const auto plan = make_plan(g, mode);
        worst = std::max(worst,
                         std::abs(exhaustive_sis_expectation(*plan->graph, plan->weights) - truth));
      }
    }
  }
  const double secs = detail::elapsed_ms(start) / 1000.0;
  return {worst <= 1e-12 && secs < 60.0,
          std::to_string(graphs) + " graphs, both modes, " +
              fmt("max |E[1/p] - per| = %.2e, %.1f s", worst, secs)};
}

Outcome zero_block_dp() {
  const auto start = std::chrono::steady_clock::now();
  CounterRng rng(20260101, 0);
  int agree = 0;
  for (int trial = 0; trial < 500; ++trial) {
    ZeroBlockSpec spec;
    spec.n = 1 + static_cast<int>(uniform_below(rng, 8));
    int rows_left = spec.n;
    int cols_left = spec.n;
    const int blocks = static_cast<int>(uniform_below(rng, 5));
    for (int i = 0; i < blocks; ++i) {
      spec.heights.push_back(static_cast<int>(uniform_below(rng, rows_left + 1)));
      spec.widths.push_back(static_cast<int>(uniform_below(rng, cols_left + 1)));
      rows_left -= spec.heights.back();
      cols_left -= spec.widths.back();
    }
    agree += zero_block_permanent(spec) == oracle::permanent(spec.materialize()) ? 1 : 0;
  }
  const bool d4 = zero_block_permanent({{1, 1, 1, 1}, {1, 1, 1, 1}, 4}) == 9;
  const bool free5 = zero_block_permanent({{0}, {0}, 5}) == 120;
  const double secs = detail::elapsed_ms(start) / 1000.0;
  return {agree == 500 && d4 && free5 && secs < 60.0,
          std::to_string(agree) + "/500 random specs exact, D_4=" + (d4 ? "9" : "wrong") +
              ", all-free n=5 " + (free5 ? "120" : "wrong") + fmt(", %.1f s", secs)};
}

Outcome latin_squares() {
  LatinOptions opts;
  opts.workers = default_workers();
  const double l5 = estimate_latin(5, 5, 100000, 1, opts).estimate.estimate.value();
  const double r6 = estimate_latin(6, 6, 100000, 1, opts).estimate.estimate.value() /
                    (720.0 * 120.0);
  const double r7 = estimate_latin(7, 7, 100000, 1, opts).estimate.estimate.value() /
                    (5040.0 * 720.0);
  const bool ok5 = std::abs(l5 / 161280.0 - 1.0) <= 0.01;
  const bool ok6 = std::abs(r6 / 9408.0 - 1.0) <= 0.02;
  const bool ok7 = std::abs(r7 / 1.6942e7 - 1.0) <= 0.02;
  return {ok5 && ok6 && ok7,
          fmt("L_5 = %.0f (161280), L_6/(6!5!) = %.1f (9408), ", l5, r6) +
              fmt("L_7/(7!6!) = %.4e (1.6942e7)", r7)};
}

Outcome card_guessing() {
  const double targets[] = {2.8333, 3.0111, 3.0433};
  const int ns[] = {2, 3, 5};
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    const auto r = expected_score(ns[i], 2, 100000, GuessPolicy{}, 1, default_workers());
    const bool in = r.ci_low <= targets[i] && targets[i] <= r.ci_high;
    ok = ok && in;
    detail += "n=" + std::to_string(ns[i]) +
              fmt(" [%.4f, %.4f] vs %.4f", r.ci_low, r.ci_high, targets[i]) + (i < 2 ? "; " : "");
  }
  return {ok, detail};
}

Outcome appendix_b_separation() {
  bool counts = true;
  for (int n = 1; n <= 8; ++n) {
    counts = counts && oracle::permanent(appendix_b_graph(n)) == static_cast<std::uint64_t>(n + 1) &&
             oracle::count_by_backtracking(appendix_b_graph(n)) == static_cast<std::uint64_t>(n + 1);
  }
  const auto g = appendix_b_graph(30);
  counts = counts && oracle::count_by_backtracking(g) == 31;
  int close = 0;
  int separated = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto r = compare_modes(g, 10000, seed, default_workers());
    close += std::abs(r.scaled.estimate.value() - 31.0) <= 3.1 ? 1 : 0;
    separated += r.uniform.sample_std.log10_abs > r.scaled.sample_std.log10_abs ? 1 : 0;
  }
  return {counts && close >= 95 && separated >= 95,
          std::string("per(G_30) = ") + (counts ? "31" : "wrong") + ", scaled within 10% on " +
              std::to_string(close) + "/100 seeds, uniform std larger on " +
              std::to_string(separated) + "/100"};
}

Outcome dense_entry_bound() {
  CounterRng rng(3500, 0);
  const double lambdas[] = {0.1, 0.2, 0.3};
  double worst = -1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double lambda = lambdas[trial % 3];
    const int n = 10 + static_cast<int>(uniform_below(rng, 51));
    const auto g = dense_random_graph(n, lambda, rng());
    const auto s = sinkhorn(g);
    const double bound = 1.0 / (2.0 * lambda * n);
    for (double v : s.q.values) {
      worst = std::max(worst, v - bound);
    }
  }
  return {worst <= 1e-6, fmt("50 graphs, max(Q_e - 1/(2 lambda n)) = %.3e", worst)};
}

Outcome brute_force_oracles() {
  bool fib = true;
  for (int n = 1; n <= 10; ++n) {
    fib = fib && permanent_brute(fibonacci_graph(n)) == oracle::fibonacci(n + 1) &&
          oracle::permanent(fibonacci_graph(n)) == oracle::fibonacci(n + 1);
  }
  CounterRng rng(7007, 0);
  int agree = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(uniform_below(rng, 10));
    const double p = 0.3 + 0.6 * uniform01(rng);
    DenseRows rows(n, std::vector<int>(n, 0));
    for (auto& row : rows) {
      for (int& v : row) {
        v = uniform01(rng) < p ? 1 : 0;
      }
    }
    agree += permanent_ryser(rows) == permanent_brute(rows) ? 1 : 0;
  }
  return {fib && agree == 100, std::string("fibonacci n<=10 ") + (fib ? "match" : "MISMATCH") +
                                   ", ryser = brute on " + std::to_string(agree) + "/100"};
}

Outcome sbm_direction() {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = sbm_two_cluster_graph(20, 0.9, 0.2, seed);
    const auto r = compare_modes(g, 10000, seed, default_workers());
    wins += (!r.scaled.estimate.is_zero() &&
             r.scaled.sample_std.log10_abs < r.uniform.sample_std.log10_abs)
                ? 1
                : 0;
  }
  return {wins >= 8, "scaled std < uniform std on " + std::to_string(wins) + "/10 graphs"};
}

Outcome cli_determinism() {
  const auto dir = std::filesystem::temp_directory_path();
  const auto graph = (dir / "permcount_acceptance_graph.txt").string();
  write_graph(dense_random_graph(24, 0.15, 11), graph);
  const std::vector<std::vector<std::string>> commands{
      {"estimate", "--graph", graph, "--samples", "5000", "--seed", "3", "--marginals"},
      {"estimate", "--graph", graph, "--samples", "5000", "--seed", "3", "--mode", "uniform"},
      {"exact", "--graph", graph, "--method", "auto"},
      {"exact", "--zero-block", "1,1;1,1;1,1;1,1;4"},
      {"latin", "--k", "5", "--n", "6", "--samples", "4000", "--seed", "3", "--odd-rows",
       "--conjectures"},
      {"cards", "--n", "4", "--m", "2", "--reps", "4000", "--policy", "exact", "--seed", "3"},
      {"cards", "--n", "3", "--m", "2", "--reps", "3000", "--policy", "sis", "--B", "30"},
      {"sbm", "--n", "20", "--p", "0.9", "--q", "0.2", "--samples", "4000", "--seed", "3",
       "--trace", "1000"},
      {"gen", "--family", "dense", "--n", "30", "--lambda", "0.2", "--seed", "3"},
  };
  int identical = 0;
  std::string failed;
  for (const auto& base : commands) {
    std::string first;
    bool same = true;
    for (const char* workers : {"1", "2", "8"}) {
      auto args = base;
      if (base[0] != "exact" && base[0] != "gen") {
        args.insert(args.end(), {"--workers", workers});
      }
      const auto r = cli_support::run(args);
      if (r.code != 0) {
        same = false;
        break;
      }
      const auto text = base[0] == "gen" ? r.out : cli_support::without_timing(r.out);
      if (first.empty()) {
        first = text;
      } else {
        same = same && text == first;
      }
    }
    identical += same ? 1 : 0;
    if (!same) {
      failed += " " + base[0];
    }
  }
  std::filesystem::remove(graph);
  const int total = static_cast<int>(commands.size());
  return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                  " invocations identical across 1/2/8 workers" +
                                  (failed.empty() ? "" : "; differing:" + failed)};
}

Outcome cameron_parity() {
  LatinOptions opts;
  opts.workers = default_workers();
  opts.odd_rows = true;
  const auto r = estimate_latin(7, 7, 1000000, 1, opts);
  const double w1 = *r.odd_row_w1;
  return {std::abs(w1 - 0.0247) <= 0.01,
          fmt("W1(odd rows, Bin(7,1/2)) = %.4f vs 0.0247 +- 0.01", w1)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 exhaustive unbiasedness", exhaustive_unbiasedness},
      {"AC2 zero-block permanent", zero_block_dp},
      {"AC3 latin squares", latin_squares},
      {"AC4 card guessing", card_guessing},
      {"AC5 appendix-b separation", appendix_b_separation},
      {"AC6 dense scaling bound", dense_entry_bound},
      {"AC7 brute-force oracles", brute_force_oracles},
      {"AC8 sbm direction", sbm_direction},
      {"AC9 cli determinism", cli_determinism},
      {"AC10 odd-row parity", cameron_parity},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
                detail::elapsed_ms(start) / 1000.0);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
