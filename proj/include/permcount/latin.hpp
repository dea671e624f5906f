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

#ifndef PERMCOUNT_LATIN_HPP
#define PERMCOUNT_LATIN_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "permcount/estimate.hpp"
#include "permcount/graph.hpp"
#include "permcount/parallel.hpp"
#include "permcount/rng.hpp"
#include "permcount/scaling.hpp"
#include "permcount/sis.hpp"

/**
 * \file
 * \brief Latin rectangles by sequential importance sampling, one row at a
 * time, plus the closed-form conjectured counts they are compared against.
 *
 * Row j is a perfect matching of positions to symbols in K_{n,n} minus the
 * edges used by rows 0..j-1. The weight of a rectangle is the product of
 * the row weights 1/p.
 */

namespace permcount {

/// rows[i][c] is the symbol at row i, column c.
using LatinRectangle = std::vector<std::vector<int>>;

struct LatinSample {
  LatinRectangle rectangle;
  /// Natural log of the product of per-row weights 1/p.
  double log_weight = 0.0;
};

inline bool is_permutation_row(std::span<const int> row) {
  std::vector<char> seen(row.size(), 0);
  for (int v : row) {
    if (v < 0 || v >= static_cast<int>(row.size()) || seen[v] != 0) {
      return false;
    }
    seen[v] = 1;
  }
  return true;
}

/// Every row a permutation of 0..n-1 and no symbol repeated in a column.
inline bool is_latin_rectangle(const LatinRectangle& rect) {
  if (rect.empty()) {
    return false;
  }
  const std::size_t n = rect.front().size();
  std::vector<std::vector<char>> column_has(n, std::vector<char>(n, 0));
  for (const auto& row : rect) {
    if (row.size() != n || !is_permutation_row(row)) {
      return false;
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (column_has[c][row[c]] != 0) {
        return false;
      }
      column_has[c][row[c]] = 1;
    }
  }
  return true;
}

/// One weighted k x n Latin rectangle. Each row prunes and scales the
/// residual graph, then draws one matching from it.
template <class Rng>
LatinSample sample_latin(int k, int n, Rng& rng, const SinkhornOptions& sinkhorn = {}) {
  if (n < 1 || k < 1 || k > n) {
    throw std::invalid_argument("latin rectangle needs 1 <= k <= n");
  }
  LatinSample out;
  out.rectangle.reserve(k);
  std::vector<char> used(static_cast<std::size_t>(n) * n, 0);  // (column, symbol)
  std::vector<Edge> edges;
  for (int row = 0; row < k; ++row) {
    edges.clear();
    for (int c = 0; c < n; ++c) {
      for (int s = 0; s < n; ++s) {
        if (used[static_cast<std::size_t>(c) * n + s] == 0) {
          edges.push_back({c, s});
        }
      }
    }
    const auto plan = make_plan(BipartiteGraph(n, edges), WeightMode::scaled, sinkhorn);
    if (!plan) {
      throw std::logic_error("residual Latin graph has no perfect matching");
    }
    MatchingSampler sampler(*plan);
    out.log_weight -= sampler.draw(rng);
    const Matching& m = sampler.matching();
    out.rectangle.push_back(m);
    for (int c = 0; c < n; ++c) {
      used[static_cast<std::size_t>(c) * n + m[c]] = 1;
    }
  }
  return out;
}

/// Parity of a permutation via its cycle count: 1 when odd.
inline int permutation_parity(std::span<const int> perm) {
  if (!is_permutation_row(perm)) {
    throw std::invalid_argument("not a permutation");
  }
  const std::size_t n = perm.size();
  std::vector<char> seen(n, 0);
  std::size_t cycles = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i] != 0) {
      continue;
    }
    ++cycles;
    for (std::size_t j = i; seen[j] == 0; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = 1;
    }
  }
  return static_cast<int>((n - cycles) % 2);
}

/// Number of rows whose permutation is odd. Rows must be permutations;
/// columns are not checked.
inline int odd_rows(const LatinRectangle& rect) {
  if (rect.empty()) {
    throw std::invalid_argument("empty rectangle");
  }
  int odd = 0;
  for (const auto& row : rect) {
    if (row.size() != rect.front().size()) {
      throw std::invalid_argument("ragged rectangle");
    }
    odd += permutation_parity(row);
  }
  return odd;
}

inline double binomial_half_pmf(int n, int t) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(t + 1.0) - std::lgamma(n - t + 1.0) -
                  n * std::numbers::ln2);
}

/// W1 distance on the integers between a weighted empirical law and
/// Bin(n, 1/2): sum over t of |F_hat(t) - F_Bin(t)|. Entries are
/// (value, weight) with values in [0, n].
inline double wasserstein_to_binomial(std::span<const std::pair<int, double>> counts, int n) {
  if (counts.empty()) {
    throw std::invalid_argument("wasserstein: empty input");
  }
  if (n < 0) {
    throw std::invalid_argument("wasserstein: n must be nonnegative");
  }
  std::vector<double> mass(n + 1, 0.0);
  double total = 0.0;
  for (const auto& [value, weight] : counts) {
    if (value < 0 || value > n) {
      throw std::invalid_argument("wasserstein: value outside [0, n]");
    }
    if (!(weight >= 0.0) || std::isinf(weight)) {
      throw std::invalid_argument("wasserstein: weights must be finite and nonnegative");
    }
    mass[value] += weight;
    total += weight;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("wasserstein: total weight is zero");
  }
  double distance = 0.0;
  double f_hat = 0.0;
  double f_bin = 0.0;
  for (int t = 0; t <= n; ++t) {
    f_hat += mass[t] / total;
    f_bin += binomial_half_pmf(n, t);
    distance += std::abs(f_hat - f_bin);
  }
  return distance;
}

/// Histogram form: histogram[t] is the weight of value t.
inline double wasserstein_to_binomial(std::span<const double> histogram, int n) {
  std::vector<std::pair<int, double>> counts;
  for (std::size_t t = 0; t < histogram.size(); ++t) {
    counts.emplace_back(static_cast<int>(t), histogram[t]);
  }
  return wasserstein_to_binomial(counts, n);
}

struct LatinOptions {
  SinkhornOptions sinkhorn;
  int workers = 1;
  bool odd_rows = false;
};

struct LatinReport {
  int k = 0;
  int n = 0;
  EstimateReport estimate;
  /// Self-normalised probability of t odd rows, t = 0..k.
  std::vector<double> odd_row_histogram;
  /// W1 from the histogram to Bin(k, 1/2).
  std::optional<double> odd_row_w1;
};

/// Mean of N rectangle weights; sample i uses stream (seed, i).
inline LatinReport estimate_latin(int k, int n, std::uint64_t samples, std::uint64_t seed,
                                  const LatinOptions& options = {}) {
  if (samples < 1) {
    throw std::invalid_argument("need at least one sample");
  }
  if (n < 1 || k < 1 || k > n) {
    throw std::invalid_argument("latin rectangle needs 1 <= k <= n");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t functionals = options.odd_rows ? static_cast<std::size_t>(k) + 1 : 0;
  auto blocks = run_blocks(
      samples, options.workers, [] { return 0; },
      [&](int&, std::uint64_t begin, std::uint64_t end) {
        EstimateAccumulator acc(functionals);
        for (std::uint64_t i = begin; i < end; ++i) {
          CounterRng rng(seed, i);
          const LatinSample s = sample_latin(k, n, rng, options.sinkhorn);
          if (options.odd_rows) {
            const std::size_t odd = static_cast<std::size_t>(odd_rows(s.rectangle));
            acc.add_indicators(s.log_weight, std::span<const std::size_t>(&odd, 1));
          } else {
            acc.add(s.log_weight);
          }
        }
        return acc;
      });
  EstimateAccumulator total(functionals);
  for (const auto& b : blocks) {
    total.merge(b);
  }
  LatinReport r;
  r.k = k;
  r.n = n;
  r.estimate = make_report(total, seed);
  if (options.odd_rows) {
    for (std::size_t t = 0; t < functionals; ++t) {
      r.odd_row_histogram.push_back(total.normalized_functional(t));
    }
    r.odd_row_w1 = wasserstein_to_binomial(r.odd_row_histogram, k);
  }
  r.estimate.wall_ms = detail::elapsed_ms(start);
  return r;
}

enum class Conjecture {
  timashov_square,
  timashov_rect,
  llw_square,
  llw_rect_normalized,
  emm_square,
  c_n,
  c_kn,
};

inline constexpr Conjecture kAllConjectures[] = {
    Conjecture::timashov_square, Conjecture::timashov_rect,       Conjecture::llw_square,
    Conjecture::llw_rect_normalized, Conjecture::emm_square, Conjecture::c_n,
    Conjecture::c_kn,
};

inline std::string to_string(Conjecture c) {
  switch (c) {
    case Conjecture::timashov_square:
      return "timashov-square";
    case Conjecture::timashov_rect:
      return "timashov-rect";
    case Conjecture::llw_square:
      return "llw-square";
    case Conjecture::llw_rect_normalized:
      return "llw-rect-normalized";
    case Conjecture::emm_square:
      return "emm-square";
    case Conjecture::c_n:
      return "c_n";
    case Conjecture::c_kn:
      return "c_kn";
  }
  return "?";
}

inline Conjecture parse_conjecture(const std::string& name) {
  for (Conjecture c : kAllConjectures) {
    if (to_string(c) == name) {
      return c;
    }
  }
  throw std::invalid_argument("unknown conjecture '" + name + "'");
}

inline bool is_square_form(Conjecture c) {
  return c == Conjecture::timashov_square || c == Conjecture::llw_square ||
         c == Conjecture::emm_square || c == Conjecture::c_n;
}

struct ConjectureValue {
  Conjecture which = Conjecture::c_n;
  int k = 0;
  int n = 0;
  double log10_value = 0.0;
};

namespace detail {

/// ln [n]_k = ln n! / (n-k)!.
inline double log_falling(double n, double k) { return std::lgamma(n + 1.0) - std::lgamma(n - k + 1.0); }

}  // namespace detail

/// Conjectured count, or normaliser, in log10. Square forms need k == n;
/// timashov-rect needs k < n.
inline ConjectureValue conjecture(Conjecture which, int k, int n) {
  if (n < 2 || k < 1 || k > n) {
    throw std::invalid_argument("conjecture needs 1 <= k <= n and n >= 2");
  }
  if (is_square_form(which) && k != n) {
    throw std::invalid_argument(to_string(which) + " is defined for squares only (k = n)");
  }
  if (which == Conjecture::timashov_rect && k == n) {
    throw std::invalid_argument("timashov-rect needs k < n; use timashov-square");
  }
  const double nd = n;
  const double kd = k;
  const double pi = std::numbers::pi;
  const double lfact_n = std::lgamma(nd + 1.0);
  const double lsquare = 3.0 * nd * lfact_n - std::lgamma(nd * nd + 1.0);
  double ln = 0.0;
  switch (which) {
    case Conjecture::timashov_rect:
      ln = kd / 2.0 * std::log(2.0 * pi * nd / std::numbers::e) +
           (nd * nd - nd * kd + 0.5) * std::log1p(-kd / nd) +
           2.0 * nd * detail::log_falling(nd, kd) - kd * nd * std::log(nd);
      break;
    case Conjecture::timashov_square:
      ln = (1.5 * nd + 1.0) * std::log(2.0 * pi) - std::numbers::ln2 - 2.0 * nd * nd - nd / 2.0 -
           1.0 + (nd * nd + 1.5 * nd - 1.0) * std::log(nd);
      break;
    case Conjecture::llw_square:
      ln = 0.5 * std::log(2.0 * pi * pi * pi) - 1.75 + lsquare - nd / 2.0;
      break;
    case Conjecture::llw_rect_normalized:
      ln = -kd / 2.0;
      break;
    case Conjecture::emm_square:
      ln = lsquare - nd / 2.0 + 5.0 / 6.0;
      break;
    case Conjecture::c_n:
      ln = lsquare - nd / 2.0;
      break;
    case Conjecture::c_kn:
      ln = kd * lfact_n + 2.0 * nd * detail::log_falling(nd, kd) -
           detail::log_falling(nd * nd, kd * nd);
      break;
  }
  return {which, k, n, ln / kLn10};
}

}  // namespace permcount

#endif  // PERMCOUNT_LATIN_HPP
