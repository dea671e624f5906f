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

#ifndef PERMCOUNT_EXACT_HPP
#define PERMCOUNT_EXACT_HPP

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "permcount/graph.hpp"
#include "permcount/matching.hpp"
#include "permcount/scaling.hpp"

namespace permcount {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kBruteForceMaxN = 12;
inline constexpr int kRyserMaxN = 30;
inline constexpr int kExhaustiveMaxN = 4;

namespace detail {

inline void check_square_01(const DenseRows& rows) {
  const std::size_t n = rows.size();
  for (const auto& r : rows) {
    if (r.size() != n) {
      throw std::invalid_argument("matrix is not square");
    }
    for (int v : r) {
      if (v != 0 && v != 1) {
        throw std::invalid_argument("matrix entry is not 0/1");
      }
    }
  }
}

}  // namespace detail

/// Permanent by backtracking over rows. n <= 12.
inline BigInt permanent_brute(const DenseRows& rows) {
  detail::check_square_01(rows);
  const int n = static_cast<int>(rows.size());
  if (n > kBruteForceMaxN) {
    throw std::invalid_argument("permanent_brute supports n <= 12");
  }
  if (n == 0) {
    return 1;
  }
  std::uint64_t count = 0;
  std::vector<int> col(n, -1);  // column tried at each row
  std::uint32_t used = 0;
  int row = 0;
  while (row >= 0) {
    if (col[row] >= 0) {
      used &= ~(1u << col[row]);
    }
    int c = col[row] + 1;
    while (c < n && (rows[row][c] == 0 || (used & (1u << c)) != 0)) {
      ++c;
    }
    if (c == n) {
      col[row] = -1;
      --row;
      continue;
    }
    col[row] = c;
    if (row == n - 1) {
      ++count;
      continue;
    }
    used |= 1u << c;
    ++row;
  }
  return count;
}

inline BigInt permanent_brute(const BipartiteGraph& g) { return permanent_brute(g.dense_rows()); }

/// Ryser's inclusion-exclusion formula over column subsets in Gray-code
/// order, O(2^n n). n <= 30.
inline BigInt permanent_ryser(const DenseRows& rows) {
  using boost::multiprecision::int256_t;
  detail::check_square_01(rows);
  const int n = static_cast<int>(rows.size());
  if (n > kRyserMaxN) {
    throw std::invalid_argument("permanent_ryser supports n <= 30");
  }
  if (n == 0) {
    return 1;
  }
  std::vector<int> row_sum(n, 0);
  int256_t total = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int bit = std::countr_zero(k);
    gray ^= std::uint64_t{1} << bit;
    const int delta = ((gray >> bit) & 1u) != 0 ? 1 : -1;
    bool zero = false;
    for (int i = 0; i < n; ++i) {
      row_sum[i] += delta * rows[i][bit];
      zero = zero || row_sum[i] == 0;
    }
    if (zero) {
      continue;
    }
    int256_t product;
    if (n <= 25) {
      // 25^25 < 2^127.
      __int128 p = 1;
      for (int v : row_sum) {
        p *= v;
      }
      product = int256_t(static_cast<std::int64_t>(p >> 64)) << 64;
      product += int256_t(static_cast<std::uint64_t>(p));
    } else {
      product = 1;
      for (int v : row_sum) {
        product *= v;
      }
    }
    if (std::popcount(gray) % 2 == n % 2) {
      total += product;
    } else {
      total -= product;
    }
  }
  return BigInt(total);
}

inline BigInt permanent_ryser(const BipartiteGraph& g) { return permanent_ryser(g.dense_rows()); }

/// All-ones n x n matrix with disjoint all-zero blocks of size a_i x b_i
/// laid along the diagonal: block i covers rows a_1 + ... + a_{i-1} onward
/// and columns b_1 + ... + b_{i-1} onward.
struct ZeroBlockSpec {
  std::vector<int> heights;  // a
  std::vector<int> widths;   // b
  int n = 0;

  int blocks() const { return static_cast<int>(heights.size()); }

  void validate() const {
    if (heights.size() != widths.size()) {
      throw std::invalid_argument("zero-block spec: a and b differ in length");
    }
    if (n < 0) {
      throw std::invalid_argument("zero-block spec: n must be nonnegative");
    }
    long long sa = 0;
    long long sb = 0;
    for (std::size_t i = 0; i < heights.size(); ++i) {
      if (heights[i] < 0 || widths[i] < 0) {
        throw std::invalid_argument("zero-block spec: negative block size");
      }
      sa += heights[i];
      sb += widths[i];
    }
    if (sa > n || sb > n) {
      throw std::invalid_argument("zero-block spec: blocks do not fit in n");
    }
  }

  DenseRows materialize() const {
    validate();
    DenseRows rows(n, std::vector<int>(n, 1));
    int r0 = 0;
    int c0 = 0;
    for (int i = 0; i < blocks(); ++i) {
      for (int r = r0; r < r0 + heights[i]; ++r) {
        for (int c = c0; c < c0 + widths[i]; ++c) {
          rows[r][c] = 0;
        }
      }
      r0 += heights[i];
      c0 += widths[i];
    }
    return rows;
  }

  /// "a1,b1;a2,b2;...;n". The final field is n alone.
  static ZeroBlockSpec parse(const std::string& text) {
    ZeroBlockSpec spec;
    std::vector<std::string> fields;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ';')) {
      fields.push_back(field);
    }
    if (fields.empty()) {
      throw std::invalid_argument("zero-block spec: empty");
    }
    auto to_int = [](const std::string& s) {
      std::size_t pos = 0;
      int v = 0;
      try {
        v = std::stoi(s, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument("zero-block spec: bad integer '" + s + "'");
      }
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])) != 0) {
        ++pos;
      }
      if (pos != s.size()) {
        throw std::invalid_argument("zero-block spec: bad integer '" + s + "'");
      }
      return v;
    };
    for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
      const auto comma = fields[i].find(',');
      if (comma == std::string::npos) {
        throw std::invalid_argument("zero-block spec: block '" + fields[i] + "' needs a,b");
      }
      spec.heights.push_back(to_int(fields[i].substr(0, comma)));
      spec.widths.push_back(to_int(fields[i].substr(comma + 1)));
    }
    spec.n = to_int(fields.back());
    spec.validate();
    return spec;
  }
};

/// Permanent of a zero-blocked matrix by inclusion-exclusion over rook
/// placements inside the blocks. f(i, j) counts placements of j
/// non-attacking rooks in the first i blocks:
///   f(i, j) = sum_k f(i-1, j-k) C(a_i, k) b_i! / (b_i - k)!
/// and per = sum_j (-1)^j (n-j)! f(r, j). O(n^2) big-integer operations.
inline BigInt zero_block_permanent(const ZeroBlockSpec& spec) {
  spec.validate();
  const int r = spec.blocks();
  const int n = spec.n;

  // Binomial rows C(a, .) for the block heights in use, by Pascal's rule.
  const int max_a = r == 0 ? 0 : *std::max_element(spec.heights.begin(), spec.heights.end());
  std::vector<char> wanted(max_a + 1, 0);
  for (int a : spec.heights) {
    wanted[a] = 1;
  }
  std::vector<std::vector<BigInt>> binom(max_a + 1);
  std::vector<BigInt> pascal{1};
  for (int a = 0; a <= max_a; ++a) {
    if (a > 0) {
      pascal.emplace_back(1);
      for (int k = a - 1; k > 0; --k) {
        pascal[k] += pascal[k - 1];
      }
    }
    if (wanted[a] != 0) {
      binom[a] = pascal;
    }
  }

  std::vector<BigInt> prev{1};
  std::vector<BigInt> next;
  std::vector<BigInt> coef;
  for (int i = 0; i < r; ++i) {
    const int a = spec.heights[i];
    const int b = spec.widths[i];
    const int kmax = std::min(a, b);
    if (kmax == 0) {
      continue;
    }
    coef.assign(kmax + 1, 0);
    BigInt falling = 1;  // b! / (b - k)!
    for (int k = 0; k <= kmax; ++k) {
      if (k > 0) {
        falling *= b - k + 1;
      }
      coef[k] = binom[a][k] * falling;
    }
    const int width = static_cast<int>(prev.size()) + kmax;
    next.assign(width, 0);
    for (int j = 0; j < static_cast<int>(prev.size()); ++j) {
      if (prev[j] == 0) {
        continue;
      }
      for (int k = 0; k <= kmax; ++k) {
        next[j + k] += prev[j] * coef[k];
      }
    }
    prev.swap(next);
  }

  // (n - j)! for j = top .. 0, built upward.
  const int top = std::min(static_cast<int>(prev.size()) - 1, n);
  BigInt fact = 1;
  for (int v = 2; v <= n - top; ++v) {
    fact *= v;
  }
  BigInt total = 0;
  for (int j = top; j >= 0; --j) {
    if (j < top) {
      fact *= n - j;
    }
    if (j % 2 == 0) {
      total += fact * prev[j];
    } else {
      total -= fact * prev[j];
    }
  }
  return total;
}

/// One root-to-leaf path of the SIS tree: an ordering pi, then one choice
/// per step.
struct SisPath {
  Matching matching;
  /// Probability of the whole path, including the 1/n! for pi.
  double probability = 0.0;
  /// log p_{pi,Q}(M), the conditional probability given pi.
  double log_prob = 0.0;
};

namespace detail {

inline void expand_sis_paths(const DirectedMatchGraph& state, const EdgeWeights& weights,
                             const std::vector<int>& order, std::size_t step, double path_prob,
                             double log_prob, std::vector<SisPath>& out) {
  if (step == order.size()) {
    out.push_back({state.matching(), path_prob, log_prob});
    return;
  }
  const int x = order[step];
  const auto candidates = state.extendable_neighbors(x);
  double total = 0.0;
  for (int y : candidates) {
    total += weights(x, y);
  }
  for (int y : candidates) {
    const double w = weights(x, y);
    if (!(w > 0.0)) {
      continue;
    }
    DirectedMatchGraph child = state;
    child.commit(x, y);
    expand_sis_paths(child, weights, order, step + 1, path_prob * (w / total),
                     log_prob + std::log(w) - std::log(total), out);
  }
}

}  // namespace detail

/// Every path of the SIS tree on g under `weights`. Paths ending in a dead
/// end are absent. n <= 4.
inline std::vector<SisPath> enumerate_sis_paths(const BipartiteGraph& g,
                                                const EdgeWeights& weights) {
  const int n = g.size();
  if (n > kExhaustiveMaxN) {
    throw std::invalid_argument("exhaustive SIS enumeration supports n <= 4");
  }
  std::vector<SisPath> out;
  auto pm = find_perfect_matching(g);
  if (n == 0 || !pm) {
    return out;
  }
  const DirectedMatchGraph root(
      std::shared_ptr<const BipartiteGraph>(&g, [](const BipartiteGraph*) {}), std::move(*pm));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  double orders = 1.0;
  for (int v = 2; v <= n; ++v) {
    orders *= v;
  }
  do {
    detail::expand_sis_paths(root, weights, order, 0, 1.0 / orders, 0.0, out);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

/// E[1/p] over the SIS tree: sum over paths of Pr(path) / p_{pi,Q}(M).
/// Equals the number of perfect matchings when the sampler is unbiased.
inline double exhaustive_sis_expectation(const BipartiteGraph& g, const EdgeWeights& weights) {
  double total = 0.0;
  for (const SisPath& p : enumerate_sis_paths(g, weights)) {
    total += p.probability * std::exp(-p.log_prob);
  }
  return total;
}

}  // namespace permcount

#endif  // PERMCOUNT_EXACT_HPP
