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

#ifndef PERMCOUNT_SIS_HPP
#define PERMCOUNT_SIS_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "permcount/estimate.hpp"
#include "permcount/graph.hpp"
#include "permcount/matching.hpp"
#include "permcount/parallel.hpp"
#include "permcount/rng.hpp"
#include "permcount/scaling.hpp"

/**
 * \file
 * \brief Sequential importance sampling of perfect matchings.
 *
 * A sample visits the left vertices in a uniformly random order. Each vertex
 * is matched to one of its extendable neighbours, chosen with probability
 * proportional to its row of the weight matrix; the product of those
 * conditional probabilities is the proposal probability p of the matching.
 * The mean of 1/p over independent samples is an unbiased estimate of the
 * number of perfect matchings.
 */

namespace permcount {

enum class WeightMode { scaled, uniform };

struct EstimateOptions {
  WeightMode mode = WeightMode::scaled;
  SinkhornOptions sinkhorn;
  int workers = 1;
};

/// Everything a sampler needs that is shared across samples: the pruned
/// graph, its edge weights, and the directed match-graph built from one
/// perfect matching.
struct SamplingPlan {
  std::shared_ptr<const BipartiteGraph> graph;
  EdgeWeights weights;
  std::optional<double> sinkhorn_residual;
  int sinkhorn_iterations = 0;
  DirectedMatchGraph initial;
};

/// Prunes, weights and seeds a sampler for g; empty when g has no perfect
/// matching.
inline std::optional<SamplingPlan> make_plan(const BipartiteGraph& g, WeightMode mode,
                                             const SinkhornOptions& sinkhorn_options = {}) {
  if (g.size() == 0) {
    return std::nullopt;
  }
  auto pm = find_perfect_matching(g);
  if (!pm) {
    return std::nullopt;
  }
  auto pruned = std::make_shared<const BipartiteGraph>(g.size(), extendable_edges(g, *pm));
  std::optional<double> residual;
  int iterations = 0;
  EdgeWeights weights;
  if (mode == WeightMode::scaled) {
    ScaledMatrix scaled = sinkhorn(*pruned, sinkhorn_options);
    residual = scaled.residual;
    iterations = scaled.iterations;
    weights = std::move(scaled.q);
  } else {
    weights = uniform_weights(*pruned);
  }
  DirectedMatchGraph initial(pruned, std::move(*pm));
  return SamplingPlan{std::move(pruned), std::move(weights), residual, iterations,
                      std::move(initial)};
}

struct WeightedSample {
  Matching matching;
  /// Natural log of the proposal probability.
  double log_prob = 0.0;
};

/// Reusable single-thread sampler over a plan.
class MatchingSampler {
 public:
  explicit MatchingSampler(const SamplingPlan& plan)
      : initial_(&plan.initial), weights_(&plan.weights), state_(plan.initial) {}

  MatchingSampler(const DirectedMatchGraph& initial, const EdgeWeights& weights)
      : initial_(&initial), weights_(&weights), state_(initial) {}

  /// Draws one matching; returns log p. The matching is available via
  /// matching() until the next draw.
  template <class Rng>
  double draw(Rng& rng) {
    state_ = *initial_;
    const int n = state_.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    shuffle(std::span<int>(order_), rng);
    double log_prob = 0.0;
    for (int x : order_) {
      state_.extendable_neighbors(x, candidates_);
      if (candidates_.empty()) {
        throw std::logic_error("no extendable neighbour; graph has no perfect matching");
      }
      int chosen = candidates_.front();
      if (candidates_.size() > 1) {
        double total = 0.0;
        for (int y : candidates_) {
          total += (*weights_)(x, y);
        }
        if (!(total > 0.0)) {
          throw std::logic_error("extendable neighbours carry no weight");
        }
        const double u = uniform01(rng) * total;
        double running = 0.0;
        chosen = -1;
        for (int y : candidates_) {
          const double w = (*weights_)(x, y);
          running += w;
          if (u < running && w > 0.0) {
            chosen = y;
            break;
          }
        }
        if (chosen < 0) {
          // u landed in the rounding gap at the top; take the last positive.
          for (auto it = candidates_.rbegin(); it != candidates_.rend(); ++it) {
            if ((*weights_)(x, *it) > 0.0) {
              chosen = *it;
              break;
            }
          }
        }
        log_prob += std::log((*weights_)(x, chosen)) - std::log(total);
      }
      state_.commit(x, chosen);
    }
    return log_prob;
  }

  const Matching& matching() const { return state_.matching(); }

 private:
  const DirectedMatchGraph* initial_;
  const EdgeWeights* weights_;
  DirectedMatchGraph state_;
  std::vector<int> order_;
  std::vector<int> candidates_;
};

/// One SIS draw on g with the given weights, which must be positive on every
/// edge that lies on a perfect matching.
template <class Rng>
WeightedSample sample_matching(const BipartiteGraph& g, const EdgeWeights& weights, Rng& rng) {
  auto pm = find_perfect_matching(g);
  if (!pm) {
    throw std::invalid_argument("graph has no perfect matching");
  }
  const DirectedMatchGraph initial(
      std::shared_ptr<const BipartiteGraph>(&g, [](const BipartiteGraph*) {}), std::move(*pm));
  MatchingSampler sampler(initial, weights);
  const double log_prob = sampler.draw(rng);
  return {sampler.matching(), log_prob};
}

/// Runs N samples of `plan` with sample i drawn from stream (seed, i), and
/// calls on_sample(acc, i, log_prob, matching) for each. Blocks are merged
/// in order, so the result is independent of the worker count.
template <class OnSample>
EstimateAccumulator run_samples(const SamplingPlan& plan, std::uint64_t samples,
                                std::uint64_t seed, int workers, std::size_t functionals,
                                OnSample on_sample) {
  auto blocks = run_blocks(
      samples, workers, [&plan] { return MatchingSampler(plan); },
      [&](MatchingSampler& sampler, std::uint64_t begin, std::uint64_t end) {
        EstimateAccumulator acc(functionals);
        for (std::uint64_t i = begin; i < end; ++i) {
          CounterRng rng(seed, i);
          const double log_prob = sampler.draw(rng);
          on_sample(acc, i, log_prob, sampler.matching());
        }
        return acc;
      });
  EstimateAccumulator total(functionals);
  for (const auto& b : blocks) {
    total.merge(b);
  }
  return total;
}

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace detail

/// Importance-sampling estimate of the number of perfect matchings of g:
/// the mean of 1/p over N samples. Exactly zero when g has none.
inline EstimateReport estimate_count(const BipartiteGraph& g, std::uint64_t samples,
                                     std::uint64_t seed, const EstimateOptions& options = {},
                                     std::vector<double>* log_weights = nullptr) {
  if (samples < 1) {
    throw std::invalid_argument("need at least one sample");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto plan = make_plan(g, options.mode, options.sinkhorn);
  if (!plan) {
    EstimateReport r;
    r.samples = samples;
    r.seed = seed;
    if (log_weights != nullptr) {
      log_weights->assign(samples, -std::numeric_limits<double>::infinity());
    }
    r.wall_ms = detail::elapsed_ms(start);
    return r;
  }
  if (log_weights != nullptr) {
    log_weights->assign(samples, 0.0);
  }
  const auto acc = run_samples(*plan, samples, seed, options.workers, 0,
                               [log_weights](EstimateAccumulator& a, std::uint64_t i,
                                             double log_prob, const Matching&) {
                                 a.add(-log_prob);
                                 if (log_weights != nullptr) {
                                   (*log_weights)[i] = -log_prob;
                                 }
                               });
  EstimateReport r = make_report(acc, seed);
  r.sinkhorn_residual = plan->sinkhorn_residual;
  r.wall_ms = detail::elapsed_ms(start);
  return r;
}

struct FunctionalEstimate {
  /// Self-normalised estimate sum f(M_i)/p_i / sum 1/p_i of the mean of f
  /// over uniformly random perfect matchings.
  double value = 0.0;
  EstimateReport weights;
};

/// `f` maps a matching (left -> right) to a real.
template <class F>
FunctionalEstimate estimate_functional(const BipartiteGraph& g, F f, std::uint64_t samples,
                                       std::uint64_t seed, const EstimateOptions& options = {}) {
  if (samples < 1) {
    throw std::invalid_argument("need at least one sample");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto plan = make_plan(g, options.mode, options.sinkhorn);
  if (!plan) {
    throw std::invalid_argument("graph has no perfect matching");
  }
  const auto acc = run_samples(
      *plan, samples, seed, options.workers, 1,
      [&f](EstimateAccumulator& a, std::uint64_t, double log_prob, const Matching& m) {
        const double value = static_cast<double>(f(std::span<const int>(m)));
        a.add(-log_prob, std::span<const double>(&value, 1));
      });
  FunctionalEstimate out;
  out.value = acc.normalized_functional(0);
  out.weights = make_report(acc, seed);
  out.weights.sinkhorn_residual = plan->sinkhorn_residual;
  out.weights.wall_ms = detail::elapsed_ms(start);
  return out;
}

/// Self-normalised estimates of P(e in M) for uniform M, as an n x n matrix.
inline std::vector<std::vector<double>> edge_marginals(const BipartiteGraph& g,
                                                       std::uint64_t samples, std::uint64_t seed,
                                                       const EstimateOptions& options = {}) {
  if (samples < 1) {
    throw std::invalid_argument("need at least one sample");
  }
  const int n = g.size();
  const auto plan = make_plan(g, options.mode, options.sinkhorn);
  if (!plan) {
    throw std::invalid_argument("graph has no perfect matching");
  }
  const auto cells = static_cast<std::size_t>(n) * n;
  const auto acc = run_samples(
      *plan, samples, seed, options.workers, cells,
      [n](EstimateAccumulator& a, std::uint64_t, double log_prob, const Matching& m) {
        thread_local std::vector<std::size_t> idx;
        idx.resize(n);
        for (int x = 0; x < n; ++x) {
          idx[x] = static_cast<std::size_t>(x) * n + m[x];
        }
        a.add_indicators(-log_prob, idx);
      });
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      out[x][y] = acc.normalized_functional(static_cast<std::size_t>(x) * n + y);
    }
  }
  return out;
}

}  // namespace permcount

#endif  // PERMCOUNT_SIS_HPP
