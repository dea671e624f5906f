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

#ifndef PERMCOUNT_CARDS_HPP
#define PERMCOUNT_CARDS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "permcount/estimate.hpp"
#include "permcount/exact.hpp"
#include "permcount/graph.hpp"
#include "permcount/parallel.hpp"
#include "permcount/rng.hpp"
#include "permcount/scaling.hpp"
#include "permcount/sis.hpp"

/**
 * \file
 * \brief Card guessing with yes/no feedback under the greedy strategy.
 *
 * A deck holds n values, value v with multiplicity m_v. The guesser walks
 * through the deck position by position and is told only whether each
 * guess was right. Unrevealed positions are the wrongly guessed ones, each
 * known to avoid one value, plus the positions not reached yet. The number
 * of arrangements consistent with the feedback is the permanent of a
 * zero-blocked matrix: rows are the unrevealed cards grouped by value,
 * columns are the wrong positions grouped by the value they avoid, followed
 * by the positions still ahead.
 */

namespace permcount {

struct Feedback {
  int value = 0;
  bool correct = false;
  bool operator==(const Feedback&) const = default;
};

struct DeckState {
  /// Unrevealed cards of each value.
  std::vector<int> a;
  /// Wrong guesses of each value, at positions still unrevealed.
  std::vector<int> b;
  std::optional<Feedback> last_feedback;

  static DeckState fresh(std::span<const int> multiplicities) {
    DeckState s;
    s.a.assign(multiplicities.begin(), multiplicities.end());
    s.b.assign(s.a.size(), 0);
    s.validate();
    return s;
  }

  /// n values, each m times.
  static DeckState fresh(int n, int m) {
    if (n < 1 || m < 1) {
      throw std::invalid_argument("deck needs n >= 1 values and m >= 1 copies");
    }
    const std::vector<int> mult(n, m);
    return fresh(mult);
  }

  int values() const { return static_cast<int>(a.size()); }
  int unrevealed() const { return std::accumulate(a.begin(), a.end(), 0); }
  int wrong_positions() const { return std::accumulate(b.begin(), b.end(), 0); }
  /// Positions not reached yet; the next guess is for the first of them.
  int positions_ahead() const { return unrevealed() - wrong_positions(); }

  void validate() const {
    if (a.size() != b.size()) {
      throw std::invalid_argument("deck state: a and b differ in length");
    }
    for (std::size_t v = 0; v < a.size(); ++v) {
      if (a[v] < 0 || b[v] < 0) {
        throw std::invalid_argument("deck state: negative count");
      }
    }
    if (wrong_positions() > unrevealed()) {
      throw std::invalid_argument("deck state: more wrong positions than unrevealed cards");
    }
  }

  /// Matrix whose permanent is N(a, b).
  ZeroBlockSpec to_zero_block() const { return {a, b, unrevealed()}; }

  bool operator==(const DeckState&) const = default;
};

/// State after guessing `guess` and hearing `correct`.
inline DeckState apply_feedback(DeckState state, int guess, bool correct) {
  if (guess < 0 || guess >= state.values()) {
    throw std::invalid_argument("guess is not a deck value");
  }
  if (correct) {
    if (state.a[guess] < 1) {
      throw std::invalid_argument("inconsistent feedback: no unrevealed card of value " +
                                  std::to_string(guess));
    }
    --state.a[guess];
  } else {
    if (state.positions_ahead() < 1) {
      throw std::invalid_argument("inconsistent feedback: no position left to guess");
    }
    ++state.b[guess];
  }
  state.last_feedback = Feedback{guess, correct};
  return state;
}

/// Arrangements of the unrevealed cards, copies told apart, that are
/// consistent with the feedback: per(M_ab).
inline BigInt arrangements(const DeckState& state) {
  return zero_block_permanent(state.to_zero_block());
}

/// Consistent arrangements with a card of value v at the next position:
/// a_v per(M_{a*v, b}), one term per copy of v. Divided by
/// arrangements(state) this is the chance that the next card is v.
inline BigInt arrangements_with_next(const DeckState& state, int v) {
  if (v < 0 || v >= state.values() || state.a[v] < 1) {
    return 0;
  }
  ZeroBlockSpec spec = state.to_zero_block();
  --spec.heights[v];
  --spec.n;
  return state.a[v] * zero_block_permanent(spec);
}

namespace detail {

inline void check_playable(const DeckState& state) {
  state.validate();
  if (state.unrevealed() < 1) {
    throw std::invalid_argument("empty deck");
  }
  if (state.positions_ahead() < 1) {
    throw std::invalid_argument("no position left to guess");
  }
}

/// Value to repeat after a wrong guess, if any.
inline std::optional<int> repeat_after_miss(const DeckState& state) {
  if (state.last_feedback && !state.last_feedback->correct) {
    const int i = state.last_feedback->value;
    if (i >= 0 && i < state.values() && state.a[i] >= 1) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Greedy guess from exact counts: after a miss, the missed value again;
/// otherwise the value maximising arrangements_with_next, smallest on ties. Increments
/// `*evaluations` when counts were computed.
inline int next_guess_exact(const DeckState& state, std::uint64_t* evaluations = nullptr) {
  detail::check_playable(state);
  if (auto repeat = detail::repeat_after_miss(state)) {
    return *repeat;
  }
  if (evaluations != nullptr) {
    ++*evaluations;
  }
  int best = -1;
  BigInt best_count = -1;
  for (int v = 0; v < state.values(); ++v) {
    if (state.a[v] < 1) {
      continue;
    }
    BigInt count = arrangements_with_next(state, v);
    if (count > best_count) {
      best_count = std::move(count);
      best = v;
    }
  }
  return best;
}

/// Bipartite graph of unrevealed cards (rows, grouped by value) against
/// unrevealed positions (wrong positions grouped by avoided value, then the
/// positions ahead). Also returns the value of each row.
inline BipartiteGraph deck_graph(const DeckState& state, std::vector<int>* row_values = nullptr) {
  const int n = state.unrevealed();
  std::vector<Edge> edges;
  if (row_values != nullptr) {
    row_values->clear();
  }
  int row = 0;
  int col0 = 0;
  for (int v = 0; v < state.values(); ++v) {
    for (int r = 0; r < state.a[v]; ++r, ++row) {
      if (row_values != nullptr) {
        row_values->push_back(v);
      }
      for (int c = 0; c < n; ++c) {
        if (c < col0 || c >= col0 + state.b[v]) {
          edges.push_back({row, c});
        }
      }
    }
    col0 += state.b[v];
  }
  return {n, std::move(edges)};
}

/// Greedy guess from SIS estimates of the next-position value law, using
/// B weighted samples on the deck graph. After a miss, or when one value
/// remains, no sampling is done.
template <class Rng>
int next_guess_sis(const DeckState& state, int samples, Rng& rng,
                   const SinkhornOptions& sinkhorn = {}, std::uint64_t* evaluations = nullptr) {
  detail::check_playable(state);
  if (samples < 1) {
    throw std::invalid_argument("SIS guess needs B >= 1");
  }
  if (auto repeat = detail::repeat_after_miss(state)) {
    return *repeat;
  }
  int remaining = 0;
  int only = -1;
  for (int v = 0; v < state.values(); ++v) {
    if (state.a[v] >= 1) {
      ++remaining;
      only = v;
    }
  }
  if (remaining == 1) {
    return only;
  }
  if (evaluations != nullptr) {
    ++*evaluations;
  }
  std::vector<int> row_values;
  const BipartiteGraph g = deck_graph(state, &row_values);
  const auto plan = make_plan(g, WeightMode::scaled, sinkhorn);
  if (!plan) {
    throw std::logic_error("deck state admits no arrangement");
  }
  const int next_col = state.wrong_positions();
  const int n = g.size();
  std::vector<int> col_owner(n);
  EstimateAccumulator acc(static_cast<std::size_t>(state.values()));
  MatchingSampler sampler(*plan);
  for (int s = 0; s < samples; ++s) {
    const double log_prob = sampler.draw(rng);
    const Matching& m = sampler.matching();
    for (int r = 0; r < n; ++r) {
      col_owner[m[r]] = r;
    }
    const auto value = static_cast<std::size_t>(row_values[col_owner[next_col]]);
    acc.add_indicators(-log_prob, std::span<const std::size_t>(&value, 1));
  }
  int best = -1;
  double best_p = -1.0;
  for (int v = 0; v < state.values(); ++v) {
    if (state.a[v] < 1) {
      continue;
    }
    const double p = acc.normalized_functional(static_cast<std::size_t>(v));
    if (p > best_p) {
      best_p = p;
      best = v;
    }
  }
  return best;
}

enum class PolicyKind { exact, sis };

struct GuessPolicy {
  PolicyKind kind = PolicyKind::exact;
  /// SIS samples per decision.
  int samples = 100;
  SinkhornOptions sinkhorn;
};

struct Guess {
  int position = 0;
  int value = 0;
  bool correct = false;
};

struct GameRecord {
  std::vector<int> deck;
  std::vector<Guess> guesses;
  int score = 0;
  /// Decisions that computed or estimated next-card probabilities.
  std::uint64_t evaluations = 0;
};

/// Plays one game through `deck` (values 0..n_values-1). With
/// `check_consistency`, every step verifies that the true unrevealed cards
/// agree with the state.
template <class Rng>
GameRecord play_game(std::span<const int> deck, int n_values, const GuessPolicy& policy,
                     Rng& rng, bool check_consistency = false) {
  std::vector<int> mult(n_values, 0);
  for (int v : deck) {
    if (v < 0 || v >= n_values) {
      throw std::invalid_argument("deck value out of range");
    }
    ++mult[v];
  }
  DeckState state = DeckState::fresh(mult);
  GameRecord record;
  record.deck.assign(deck.begin(), deck.end());
  std::vector<int> avoided(deck.size(), -1);  // value a wrong position avoids
  for (int pos = 0; pos < static_cast<int>(deck.size()); ++pos) {
    const int guess = policy.kind == PolicyKind::exact
                          ? next_guess_exact(state, &record.evaluations)
                          : next_guess_sis(state, policy.samples, rng, policy.sinkhorn,
                                           &record.evaluations);
    const bool correct = deck[pos] == guess;
    record.guesses.push_back({pos, guess, correct});
    record.score += correct ? 1 : 0;
    state = apply_feedback(std::move(state), guess, correct);
    if (!correct) {
      avoided[pos] = guess;
    }
    if (check_consistency) {
      std::vector<int> truth(n_values, 0);
      std::vector<int> wrong(n_values, 0);
      for (int p = 0; p < static_cast<int>(deck.size()); ++p) {
        if (p > pos || avoided[p] >= 0) {
          ++truth[deck[p]];
        }
        if (p <= pos && avoided[p] >= 0) {
          if (deck[p] == avoided[p]) {
            throw std::logic_error("deck contradicts feedback");
          }
          ++wrong[avoided[p]];
        }
      }
      if (truth != state.a || wrong != state.b) {
        throw std::logic_error("deck state out of sync with the deck");
      }
    }
  }
  return record;
}

struct CardsReport {
  int n = 0;
  int m = 0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double sample_std = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// histogram[s] = games with score s, s = 0..n*m.
  std::vector<std::uint64_t> histogram;
  double wall_ms = 0.0;
};

/// Shuffled n x m deck for game g: stream (seed, g) shuffles, then drives
/// any SIS decisions.
template <class Rng>
std::vector<int> shuffled_deck(int n, int m, Rng& rng) {
  std::vector<int> deck;
  deck.reserve(static_cast<std::size_t>(n) * m);
  for (int v = 0; v < n; ++v) {
    for (int c = 0; c < m; ++c) {
      deck.push_back(v);
    }
  }
  shuffle(std::span<int>(deck), rng);
  return deck;
}

/// Mean greedy score over `reps` uniformly shuffled decks of n values with
/// m copies each, with a normal 95% interval.
inline CardsReport expected_score(int n, int m, std::uint64_t reps, const GuessPolicy& policy,
                                  std::uint64_t seed, int workers = 1) {
  if (reps < 1) {
    throw std::invalid_argument("need at least one repetition");
  }
  if (n < 1 || m < 1) {
    throw std::invalid_argument("deck needs n >= 1 values and m >= 1 copies");
  }
  const auto start = std::chrono::steady_clock::now();
  const int cards = n * m;
  auto blocks = run_blocks(reps, workers, [] { return 0; },
                           [&](int&, std::uint64_t begin, std::uint64_t end) {
                             std::vector<std::uint64_t> hist(cards + 1, 0);
                             for (std::uint64_t g = begin; g < end; ++g) {
                               CounterRng rng(seed, g);
                               const auto deck = shuffled_deck(n, m, rng);
                               ++hist[play_game(deck, n, policy, rng).score];
                             }
                             return hist;
                           });
  CardsReport r;
  r.n = n;
  r.m = m;
  r.reps = reps;
  r.seed = seed;
  r.histogram.assign(cards + 1, 0);
  for (const auto& h : blocks) {
    for (int s = 0; s <= cards; ++s) {
      r.histogram[s] += h[s];
    }
  }
  // Integer sums, so the result does not depend on block order.
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  for (int s = 0; s <= cards; ++s) {
    sum += r.histogram[s] * static_cast<std::uint64_t>(s);
    sum_sq += r.histogram[s] * static_cast<std::uint64_t>(s) * static_cast<std::uint64_t>(s);
  }
  const auto count = static_cast<double>(reps);
  r.mean = static_cast<double>(sum) / count;
  if (reps > 1) {
    const double centered =
        static_cast<double>(sum_sq) - static_cast<double>(sum) * static_cast<double>(sum) / count;
    r.sample_std = std::sqrt(std::max(0.0, centered / (count - 1.0)));
  }
  r.std_error = r.sample_std / std::sqrt(count);
  r.ci_low = r.mean - kZ95 * r.std_error;
  r.ci_high = r.mean + kZ95 * r.std_error;
  r.wall_ms = detail::elapsed_ms(start);
  return r;
}

}  // namespace permcount

#endif  // PERMCOUNT_CARDS_HPP
