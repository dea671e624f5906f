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

#ifndef PERMCOUNT_CLI_HPP
#define PERMCOUNT_CLI_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permcount/cards.hpp"
#include "permcount/estimate.hpp"
#include "permcount/exact.hpp"
#include "permcount/graph.hpp"
#include "permcount/latin.hpp"
#include "permcount/parallel.hpp"
#include "permcount/sbm.hpp"
#include "permcount/scaling.hpp"
#include "permcount/sis.hpp"

/**
 * \file
 * \brief The `permcount` command line: estimate, exact, latin, cards, sbm
 * and gen subcommands writing JSON (default) or CSV reports.
 *
 * Exit status is 0 on success, 2 on a usage error and 1 on any runtime
 * failure; diagnostics go to the error stream.
 */

namespace permcount::cli {

using nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

inline ordered_json log10_or_null(const LogScalar& v) {
  if (v.sign <= 0) {
    return nullptr;
  }
  return v.log10_abs;
}

template <class T>
ordered_json optional_or_null(const std::optional<T>& v) {
  if (!v) {
    return nullptr;
  }
  return *v;
}

inline ordered_json to_json(const EstimateReport& r) {
  ordered_json j;
  j["estimate_log10"] = log10_or_null(r.estimate);
  j["estimate_decimal"] = r.estimate.to_decimal();
  j["stderr_log10"] = log10_or_null(r.std_error);
  j["stderr_decimal"] = r.std_error.to_decimal();
  j["ci95"] = {r.ci_low.to_decimal(), r.ci_high.to_decimal()};
  j["N"] = r.samples;
  j["seed"] = r.seed;
  j["ess"] = optional_or_null(r.ess);
  j["kl_hat"] = optional_or_null(r.kl_hat);
  j["sinkhorn_residual"] = optional_or_null(r.sinkhorn_residual);
  j["wall_ms"] = r.wall_ms;
  return j;
}

inline ordered_json to_json(const std::vector<TracePoint>& t) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : t) {
    arr.push_back({{"N", p.samples}, {"estimate_log10", log10_or_null(p.estimate)}});
  }
  return arr;
}

namespace detail {

inline std::string scalar_text(const ordered_json& v) {
  if (v.is_string()) {
    return v.get<std::string>();
  }
  if (v.is_null()) {
    return "";
  }
  return v.dump();
}

inline void flatten(const ordered_json& j, const std::string& prefix,
                    std::vector<std::pair<std::string, std::string>>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const auto& v = it.value();
    if (v.is_object()) {
      flatten(v, key, out);
    } else if (v.is_array()) {
      if (std::all_of(v.begin(), v.end(), [](const auto& e) { return e.is_primitive(); })) {
        std::string joined;
        for (std::size_t i = 0; i < v.size(); ++i) {
          joined += (i > 0 ? ";" : "") + scalar_text(v[i]);
        }
        out.emplace_back(key, joined);
      }
    } else {
      out.emplace_back(key, scalar_text(v));
    }
  }
}

}  // namespace detail

/// Two-column "key,value" CSV of the scalar fields; nested objects use
/// dotted keys and scalar arrays are joined with ';'.
inline std::string to_csv(const ordered_json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  detail::flatten(j, "", rows);
  std::string out = "key,value\n";
  for (const auto& [k, v] : rows) {
    out += k + "," + v + "\n";
  }
  return out;
}

inline std::string trace_csv(const std::vector<TracePoint>& scaled,
                             const std::vector<TracePoint>& uniform) {
  std::ostringstream os;
  os << "mode,N,estimate_log10\n";
  auto rows = [&os](const char* mode, const std::vector<TracePoint>& t) {
    for (const auto& p : t) {
      os << mode << ',' << p.samples << ',';
      if (p.estimate.sign > 0) {
        os << ordered_json(p.estimate.log10_abs).dump();
      }
      os << '\n';
    }
  };
  rows("scaled", scaled);
  rows("uniform", uniform);
  return os.str();
}

struct Output {
  std::string format = "json";
  std::string path;
};

inline void emit(const ordered_json& report, const Output& o, std::ostream& out) {
  const std::string text = o.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path);
  if (!f) {
    throw std::runtime_error("cannot write '" + o.path + "'");
  }
  f << text;
  if (!f) {
    throw std::runtime_error("write failed for '" + o.path + "'");
  }
}

inline void add_output(CLI::App* cmd, Output& o) {
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", o.path, "Write the report here instead of stdout");
}

inline void add_workers(CLI::App* cmd, int& workers) {
  cmd->add_option("--workers", workers, "Worker threads (default: PERMCOUNT_THREADS or cores)")
      ->check(CLI::PositiveNumber);
}

inline void add_sinkhorn(CLI::App* cmd, SinkhornOptions& s) {
  cmd->add_option("--tol", s.tol, "Sinkhorn tolerance on row and column sums")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--sinkhorn-max-iters", s.max_iters, "Sinkhorn iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

/// Runs the command line `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counting perfect matchings by sequential importance sampling", "permcount"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "permcount 1.0.0");

  int workers = default_workers();
  SinkhornOptions sinkhorn;
  Output output;
  std::uint64_t seed = 1;
  std::uint64_t samples = 0;

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the number of perfect matchings");
  std::string est_graph;
  std::string est_mode = "scaled";
  bool est_marginals = false;
  est->add_option("--graph", est_graph, "Graph file (edge list or dense)")->required();
  est->add_option("--samples", samples, "Number of SIS samples N")
      ->required()
      ->check(CLI::PositiveNumber);
  est->add_option("--seed", seed, "Random seed")->capture_default_str();
  est->add_option("--mode", est_mode, "Edge weights")
      ->check(CLI::IsMember({"scaled", "uniform"}))
      ->capture_default_str();
  est->add_flag("--marginals", est_marginals, "Also report estimated edge marginals");
  add_sinkhorn(est, sinkhorn);
  add_workers(est, workers);
  add_output(est, output);

  // exact
  auto* ex = app.add_subcommand("exact", "Exact permanent");
  std::string ex_graph;
  std::string ex_zero_block;
  std::string ex_method = "auto";
  auto* ex_graph_opt = ex->add_option("--graph", ex_graph, "Graph file");
  auto* ex_zb_opt =
      ex->add_option("--zero-block", ex_zero_block, "Zero-block spec \"a1,b1;a2,b2;...;n\"");
  ex_graph_opt->excludes(ex_zb_opt);
  ex->add_option("--method", ex_method, "Algorithm for graph input")
      ->check(CLI::IsMember({"auto", "brute", "ryser"}))
      ->capture_default_str();
  add_output(ex, output);

  // latin
  auto* lat = app.add_subcommand("latin", "Estimate the number of k x n Latin rectangles");
  int lat_k = 0;
  int lat_n = 0;
  bool lat_odd = false;
  bool lat_conj = false;
  lat->add_option("--k", lat_k, "Rows")->required()->check(CLI::PositiveNumber);
  lat->add_option("--n", lat_n, "Columns and symbols")->required()->check(CLI::PositiveNumber);
  lat->add_option("--samples", samples, "Number of samples N")
      ->required()
      ->check(CLI::PositiveNumber);
  lat->add_option("--seed", seed, "Random seed")->capture_default_str();
  lat->add_flag("--odd-rows", lat_odd, "Weighted odd-row histogram and W1 to Bin(k, 1/2)");
  lat->add_flag("--conjectures", lat_conj, "Conjectured counts for (k, n) in log10");
  add_sinkhorn(lat, sinkhorn);
  add_workers(lat, workers);
  add_output(lat, output);

  // cards
  auto* crd = app.add_subcommand("cards", "Greedy card guessing with yes/no feedback");
  int crd_n = 0;
  int crd_m = 0;
  std::uint64_t crd_reps = 0;
  std::string crd_policy = "exact";
  int crd_b = 100;
  crd->add_option("--n", crd_n, "Distinct values")->required()->check(CLI::PositiveNumber);
  crd->add_option("--m", crd_m, "Copies of each value")->required()->check(CLI::PositiveNumber);
  crd->add_option("--reps", crd_reps, "Games")->required()->check(CLI::PositiveNumber);
  crd->add_option("--policy", crd_policy, "Guessing policy")
      ->check(CLI::IsMember({"exact", "sis"}))
      ->capture_default_str();
  crd->add_option("--B", crd_b, "SIS samples per decision")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  crd->add_option("--seed", seed, "Random seed")->capture_default_str();
  add_sinkhorn(crd, sinkhorn);
  add_workers(crd, workers);
  add_output(crd, output);

  // sbm
  auto* sb = app.add_subcommand("sbm", "Scaled vs uniform SIS on a two-cluster block model");
  int sb_n = 0;
  double sb_p = 0.0;
  double sb_q = 0.0;
  std::uint64_t sb_stride = 0;
  std::string sb_trace_out;
  sb->add_option("--n", sb_n, "Vertices per side")->required()->check(CLI::PositiveNumber);
  sb->add_option("--p", sb_p, "Edge probability within and across the first cluster")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sb->add_option("--q", sb_q, "Edge probability inside the second cluster")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sb->add_option("--samples", samples, "Number of samples N per mode")
      ->required()
      ->check(CLI::PositiveNumber);
  sb->add_option("--seed", seed, "Random seed (graph and samplers)")->capture_default_str();
  sb->add_option("--trace", sb_stride, "Record the running estimate every this many samples")
      ->check(CLI::PositiveNumber);
  sb->add_option("--trace-out", sb_trace_out, "CSV file for the running-estimate trace");
  add_sinkhorn(sb, sinkhorn);
  add_workers(sb, workers);
  add_output(sb, output);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph file");
  std::string gen_family;
  int gen_n = 0;
  double gen_lambda = 0.25;
  double gen_p = 0.5;
  double gen_q = 0.5;
  std::string gen_format = "edge-list";
  gen->add_option("--family", gen_family, "Graph family")
      ->required()
      ->check(CLI::IsMember({"complete", "dense", "sbm", "appendix-b", "fibonacci"}));
  gen->add_option("--n", gen_n, "Size parameter")->required()->check(CLI::PositiveNumber);
  gen->add_option("--lambda", gen_lambda, "Density excess for dense graphs")
      ->check(CLI::Range(0.0, 0.5))
      ->capture_default_str();
  gen->add_option("--p", gen_p, "SBM probability p")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--q", gen_q, "SBM probability q")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--seed", seed, "Random seed")->capture_default_str();
  gen->add_option("--format", gen_format, "File format")
      ->check(CLI::IsMember({"edge-list", "dense"}))
      ->capture_default_str();
  gen->add_option("--out", output.path, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*est) {
      const BipartiteGraph g = read_graph(est_graph, IsolatedVertices::allow);
      const EstimateOptions opts{est_mode == "scaled" ? WeightMode::scaled : WeightMode::uniform,
                                 sinkhorn, workers};
      ordered_json j;
      j["command"] = "estimate";
      j["graph"] = {{"n", g.size()}, {"edges", g.edge_count()}};
      j["mode"] = est_mode;
      j["report"] = to_json(estimate_count(g, samples, seed, opts));
      if (est_marginals) {
        if (find_perfect_matching(g)) {
          j["marginals"] = edge_marginals(g, samples, seed, opts);
        } else {
          j["marginals"] = nullptr;
        }
      }
      emit(j, output, out);
    } else if (*ex) {
      ordered_json j;
      j["command"] = "exact";
      if (!ex_zero_block.empty()) {
        const ZeroBlockSpec spec = ZeroBlockSpec::parse(ex_zero_block);
        j["n"] = spec.n;
        j["method"] = "zero-block";
        j["permanent"] = zero_block_permanent(spec).str();
      } else if (!ex_graph.empty()) {
        const BipartiteGraph g = read_graph(ex_graph, IsolatedVertices::allow);
        std::string method = ex_method;
        if (method == "auto") {
          method = g.size() <= kBruteForceMaxN ? "brute" : "ryser";
        }
        j["n"] = g.size();
        j["method"] = method;
        j["permanent"] = (method == "brute" ? permanent_brute(g) : permanent_ryser(g)).str();
      } else {
        err << "exact: one of --graph or --zero-block is required\n";
        return kExitUsage;
      }
      emit(j, output, out);
    } else if (*lat) {
      if (lat_k > lat_n) {
        throw std::invalid_argument("latin: need k <= n");
      }
      LatinOptions opts{sinkhorn, workers, lat_odd};
      const LatinReport r = estimate_latin(lat_k, lat_n, samples, seed, opts);
      ordered_json j;
      j["command"] = "latin";
      j["k"] = lat_k;
      j["n"] = lat_n;
      j["report"] = to_json(r.estimate);
      if (lat_odd) {
        j["odd_rows"] = {{"histogram", r.odd_row_histogram},
                         {"w1_to_binomial", optional_or_null(r.odd_row_w1)}};
      }
      if (lat_conj) {
        ordered_json c = ordered_json::object();
        if (lat_n >= 2) {
          for (Conjecture which : kAllConjectures) {
            const bool square = is_square_form(which);
            if ((square && lat_k != lat_n) ||
                (which == Conjecture::timashov_rect && lat_k == lat_n)) {
              continue;
            }
            c[to_string(which)] = conjecture(which, lat_k, lat_n).log10_value;
          }
        }
        j["conjectures_log10"] = c;
      }
      emit(j, output, out);
    } else if (*crd) {
      GuessPolicy policy{crd_policy == "exact" ? PolicyKind::exact : PolicyKind::sis, crd_b,
                         sinkhorn};
      const CardsReport r = expected_score(crd_n, crd_m, crd_reps, policy, seed, workers);
      ordered_json j;
      j["command"] = "cards";
      j["n"] = crd_n;
      j["m"] = crd_m;
      j["policy"] = crd_policy;
      if (policy.kind == PolicyKind::sis) {
        j["B"] = crd_b;
      }
      j["report"] = {{"mean", r.mean},
                     {"sample_std", r.sample_std},
                     {"stderr", r.std_error},
                     {"ci95", {r.ci_low, r.ci_high}},
                     {"N", r.reps},
                     {"seed", r.seed},
                     {"wall_ms", r.wall_ms}};
      j["score_histogram"] = r.histogram;
      emit(j, output, out);
    } else if (*sb) {
      const std::uint64_t graph_seed = derive_seed(seed, 0);
      const BipartiteGraph g = sbm_two_cluster_graph(sb_n, sb_p, sb_q, graph_seed);
      const ComparisonReport r = compare_modes(g, samples, seed, workers, sb_stride, sinkhorn);
      ordered_json j;
      j["command"] = "sbm";
      j["graph"] = {{"n", sb_n},
                    {"p", sb_p},
                    {"q", sb_q},
                    {"seed", seed},
                    {"edges", g.edge_count()},
                    {"has_perfect_matching", find_perfect_matching(g).has_value()}};
      j["scaled"] = to_json(r.scaled);
      j["uniform"] = to_json(r.uniform);
      j["std_ratio"] = optional_or_null(r.std_ratio);
      if (sb_stride > 0) {
        j["trace"] = {{"stride", sb_stride},
                      {"scaled", to_json(r.scaled_trace)},
                      {"uniform", to_json(r.uniform_trace)}};
        if (!sb_trace_out.empty()) {
          std::ofstream f(sb_trace_out);
          if (!f) {
            throw std::runtime_error("cannot write '" + sb_trace_out + "'");
          }
          f << trace_csv(r.scaled_trace, r.uniform_trace);
        }
      }
      emit(j, output, out);
    } else if (*gen) {
      GraphGenSpec spec;
      spec.n = gen_n;
      spec.seed = seed;
      spec.lambda = gen_lambda;
      BipartiteGraph g;
      if (gen_family == "complete") {
        spec.family = GraphFamily::complete;
        g = generate(spec);
      } else if (gen_family == "dense") {
        spec.family = GraphFamily::dense_random;
        g = generate(spec);
      } else if (gen_family == "sbm") {
        g = sbm_two_cluster_graph(gen_n, gen_p, gen_q, seed);
      } else if (gen_family == "appendix-b") {
        spec.family = GraphFamily::appendix_b;
        g = generate(spec);
      } else {
        spec.family = GraphFamily::fibonacci;
        g = generate(spec);
      }
      const GraphFormat fmt = gen_format == "dense" ? GraphFormat::dense : GraphFormat::edge_list;
      if (output.path.empty()) {
        write_graph(g, out, fmt);
      } else {
        write_graph(g, output.path, fmt);
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace permcount::cli

#endif  // PERMCOUNT_CLI_HPP
