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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "permcount/graph.hpp"
#include "permcount/rng.hpp"
#include "permcount/scaling.hpp"
#include "permcount/sis.hpp"

namespace permcount {
namespace {

const BipartiteGraph kPath = from_dense_rows({{1, 1}, {0, 1}});

BipartiteGraph identity_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    edges.push_back({i, i});
  }
  return {n, edges};
}

EstimateOptions with_mode(WeightMode mode, int workers = 1) {
  EstimateOptions o;
  o.mode = mode;
  o.workers = workers;
  return o;
}

TEST(SampleMatching, IdentityIsForced) {
  const auto g = identity_graph(5);
  CounterRng rng(1, 0);
  for (int i = 0; i < 10; ++i) {
    const auto s = sample_matching(g, uniform_weights(g), rng);
    EXPECT_EQ(s.matching, (Matching{0, 1, 2, 3, 4}));
    EXPECT_EQ(s.log_prob, 0.0);
  }
}

TEST(SampleMatching, CompleteTwoByTwoIsFair) {
  const auto g = complete_graph(2);
  const auto w = uniform_weights(g);
  int straight = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    CounterRng rng(2, i);
    const auto s = sample_matching(g, w, rng);
    EXPECT_NEAR(s.log_prob, std::log(0.5), 1e-15);
    straight += s.matching[0] == 0 ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(straight) / trials, 0.5, 0.02);
}

TEST(SampleMatching, PathAvoidsDeadEdge) {
  CounterRng rng(3, 0);
  for (int i = 0; i < 20; ++i) {
    const auto s = sample_matching(kPath, uniform_weights(kPath), rng);
    EXPECT_EQ(s.matching, (Matching{0, 1}));
    EXPECT_EQ(s.log_prob, 0.0);
  }
}

TEST(EstimateCount, CompleteGraphIsExact) {
  const auto r = estimate_count(complete_graph(4), 1000, 7);
  EXPECT_EQ(r.estimate.to_decimal(), "24");
  EXPECT_TRUE(r.sample_std.is_zero());
  EXPECT_TRUE(r.std_error.is_zero());
  EXPECT_NEAR(*r.ess, 1000.0, 1e-9);
  ASSERT_TRUE(r.sinkhorn_residual);
  EXPECT_LE(*r.sinkhorn_residual, 1e-10);
}

TEST(EstimateCount, NoPerfectMatchingGivesZero) {
  const auto g = from_dense_rows({{1, 1, 0}, {1, 1, 0}, {1, 1, 0}}, IsolatedVertices::allow);
  std::vector<double> lw;
  const auto r = estimate_count(g, 10, 1, {}, &lw);
  EXPECT_TRUE(r.estimate.is_zero());
  EXPECT_EQ(r.samples, 10u);
  EXPECT_EQ(lw.size(), 10u);
  EXPECT_TRUE(std::all_of(lw.begin(), lw.end(), [](double v) { return std::isinf(v); }));
}

TEST(EstimateCount, AppendixBTen) {
  const auto r = estimate_count(appendix_b_graph(10), 10000, 1);
  EXPECT_NEAR(r.estimate.value(), 11.0, 1.1);
}

TEST(EstimateCount, IntervalCoversTruthOnSmallRandomGraphs) {
  CounterRng rng(31, 0);
  int covered = 0;
  int total = 0;
  while (total < 40) {
    const int n = 4 + static_cast<int>(uniform_below(rng, 4));
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (uniform01(rng) < 0.6) {
          edges.push_back({i, j});
        }
      }
    }
    const BipartiteGraph g(n, edges);
    const auto truth = static_cast<double>(oracle::permanent(g));
    if (truth == 0) {
      continue;
    }
    ++total;
    const auto r = estimate_count(g, 4000, rng());
    covered += (r.ci_low.value() <= truth && truth <= r.ci_high.value()) ? 1 : 0;
  }
  EXPECT_GE(covered, 34);
}

TEST(EstimateCount, WorkerCountDoesNotChangeResult) {
  const auto g = dense_random_graph(25, 0.1, 3);
  std::vector<double> lw1;
  const auto r1 = estimate_count(g, 5000, 9, with_mode(WeightMode::scaled, 1), &lw1);
  for (int workers : {2, 8}) {
    std::vector<double> lw;
    const auto r = estimate_count(g, 5000, 9, with_mode(WeightMode::scaled, workers), &lw);
    EXPECT_EQ(lw, lw1);
    EXPECT_EQ(r.estimate.log10_abs, r1.estimate.log10_abs);
    EXPECT_EQ(r.sample_std.log10_abs, r1.sample_std.log10_abs);
    EXPECT_EQ(*r.ess, *r1.ess);
    EXPECT_EQ(*r.kl_hat, *r1.kl_hat);
  }
}

TEST(EstimateCount, UniformModeOnLargeAppendixBStaysFinite) {
  const int n = 200;
  std::vector<double> lw;
  const auto r = estimate_count(appendix_b_graph(n), 200, 4, with_mode(WeightMode::uniform), &lw);
  for (double v : lw) {
    ASSERT_TRUE(std::isfinite(v));
    ASSERT_LE(v, (n + 1) * std::log(2.0) + std::log(n + 1.0));
  }
  EXPECT_TRUE(std::isfinite(r.estimate.log10_abs));
  EXPECT_TRUE(std::isfinite(r.sample_std.log10_abs));
  EXPECT_TRUE(std::isfinite(*r.ess));
}

TEST(EstimateCount, RejectsZeroSamples) {
  EXPECT_THROW(estimate_count(complete_graph(2), 0, 1), std::invalid_argument);
}

TEST(Support, AllSixMatchingsOfK33) {
  const auto plan = make_plan(complete_graph(3), WeightMode::scaled);
  ASSERT_TRUE(plan);
  MatchingSampler sampler(*plan);
  std::map<Matching, int> seen;
  for (int i = 0; i < 10000; ++i) {
    CounterRng rng(5, i);
    sampler.draw(rng);
    ASSERT_TRUE(is_perfect_matching(complete_graph(3), sampler.matching()));
    ++seen[sampler.matching()];
  }
  EXPECT_EQ(seen.size(), 6u);
}

TEST(Functional, ConstantIsExactlyOne) {
  const auto r =
      estimate_functional(dense_random_graph(12, 0.1, 2), [](std::span<const int>) { return 1.0; },
                          500, 3);
  EXPECT_EQ(r.value, 1.0);
}

TEST(Functional, FixedPointsOfK33) {
  const auto r = estimate_functional(
      complete_graph(3),
      [](std::span<const int> m) {
        int fixed = 0;
        for (int i = 0; i < static_cast<int>(m.size()); ++i) {
          fixed += m[i] == i ? 1 : 0;
        }
        return fixed;
      },
      20000, 4);
  EXPECT_NEAR(r.value, 1.0, 0.03);
}

TEST(Functional, EdgeIndicatorOfK22) {
  const auto r = estimate_functional(
      complete_graph(2), [](std::span<const int> m) { return m[0] == 0 ? 1.0 : 0.0; }, 20000, 5);
  EXPECT_NEAR(r.value, 0.5, 0.02);
}

TEST(Functional, ThrowsWithoutPerfectMatching) {
  const auto g = from_dense_rows({{1, 0}, {1, 0}}, IsolatedVertices::allow);
  EXPECT_THROW(estimate_functional(g, [](std::span<const int>) { return 1.0; }, 10, 1),
               std::invalid_argument);
}

TEST(Marginals, CompleteGraph) {
  const auto m = edge_marginals(complete_graph(4), 1000, 1);
  for (const auto& row : m) {
    double total = 0.0;
    for (double v : row) {
      EXPECT_NEAR(v, 0.25, 0.05);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Marginals, IdentityIsExact) {
  const auto m = edge_marginals(identity_graph(3), 10, 1);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(m[i][j], i == j ? 1.0 : 0.0);
    }
  }
}

TEST(Marginals, FibonacciThree) {
  const auto m = edge_marginals(fibonacci_graph(3), 20000, 2);
  EXPECT_NEAR(m[0][0], 2.0 / 3.0, 0.02);
  EXPECT_NEAR(m[1][1], 1.0 / 3.0, 0.02);
  EXPECT_NEAR(m[0][1], 1.0 / 3.0, 0.02);
}

}  // namespace
}  // namespace permcount
