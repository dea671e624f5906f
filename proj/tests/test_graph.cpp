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

#include <cstdio>
#include <filesystem>
#include <string>

#include "oracles.hpp"
#include "permcount/graph.hpp"
#include "permcount/rng.hpp"

namespace permcount {
namespace {

void expect_well_formed(const BipartiteGraph& g) {
  const int n = g.size();
  std::size_t from_left = 0;
  std::size_t from_right = 0;
  for (int v = 0; v < n; ++v) {
    from_left += g.right_neighbors(v).size();
    from_right += g.left_neighbors(v).size();
    for (int y : g.right_neighbors(v)) {
      ASSERT_TRUE(g.has_edge(v, y));
    }
    for (int x : g.left_neighbors(v)) {
      ASSERT_TRUE(g.has_edge(x, v));
    }
  }
  EXPECT_EQ(from_left, g.edge_count());
  EXPECT_EQ(from_right, g.edge_count());
  for (std::size_t i = 1; i < g.edges().size(); ++i) {
    ASSERT_LT(g.edges()[i - 1], g.edges()[i]);
  }
}

TEST(FromDenseRows, AllOnesIsComplete) {
  const auto g = from_dense_rows({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  EXPECT_EQ(g.edge_count(), 9u);
  EXPECT_EQ(g, complete_graph(3));
}

TEST(FromDenseRows, Identity) {
  const auto g = from_dense_rows({{1, 0}, {0, 1}});
  EXPECT_EQ(std::vector<Edge>(g.edges().begin(), g.edges().end()),
            (std::vector<Edge>{{0, 0}, {1, 1}}));
}

TEST(FromDenseRows, ZeroRowIsRejected) {
  try {
    from_dense_rows({{1, 1}, {0, 0}});
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("isolated vertex"), std::string::npos);
  }
}

TEST(FromDenseRows, RejectsNonSquareAndNonBinary) {
  EXPECT_THROW(from_dense_rows({{1, 1}, {1}}), std::invalid_argument);
  EXPECT_THROW(from_dense_rows({{1, 2}, {1, 1}}), std::invalid_argument);
}

TEST(AppendixB, SmallCases) {
  EXPECT_EQ(appendix_b_graph(1), complete_graph(2));
  const auto g2 = appendix_b_graph(2);
  EXPECT_EQ(g2.dense_rows(), (DenseRows{{1, 1, 1}, {1, 1, 0}, {1, 0, 1}}));
  EXPECT_EQ(oracle::permanent(g2), 3u);
  EXPECT_EQ(oracle::permanent(appendix_b_graph(5)), 6u);
}

TEST(AppendixB, CountIsNPlusOne) {
  for (int n = 1; n <= 8; ++n) {
    const auto g = appendix_b_graph(n);
    expect_well_formed(g);
    EXPECT_EQ(oracle::permanent(g), static_cast<std::uint64_t>(n + 1)) << "n=" << n;
  }
}

TEST(Fibonacci, SmallCases) {
  EXPECT_EQ(fibonacci_graph(1).edge_count(), 1u);
  EXPECT_EQ(oracle::permanent(fibonacci_graph(1)), 1u);
  EXPECT_EQ(oracle::permanent(fibonacci_graph(3)), 3u);
  EXPECT_EQ(oracle::permanent(fibonacci_graph(5)), 8u);
}

TEST(Fibonacci, CountsAreFibonacciNumbers) {
  for (int n = 1; n <= 10; ++n) {
    const auto g = fibonacci_graph(n);
    expect_well_formed(g);
    EXPECT_EQ(oracle::permanent(g), oracle::fibonacci(n + 1)) << "n=" << n;
  }
}

TEST(DenseRandom, ThresholdNGivesComplete) {
  EXPECT_EQ(dense_degree_threshold(10, 0.49), 10);
  EXPECT_EQ(dense_random_graph(10, 0.49, 3), complete_graph(10));
}

TEST(DenseRandom, DegreesAndDeterminism) {
  const auto g = dense_random_graph(10, 0.3, 1);
  for (int v = 0; v < 10; ++v) {
    EXPECT_GE(g.left_degree(v), 8);
    EXPECT_GE(g.right_degree(v), 8);
  }
  EXPECT_EQ(g, dense_random_graph(10, 0.3, 1));
}

TEST(DenseRandom, MinDegreeOverRandomTriples) {
  CounterRng rng(2024, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 59));
    const double lambda = 0.01 + 0.48 * uniform01(rng);
    const std::uint64_t seed = rng();
    const int threshold = static_cast<int>(std::ceil((0.5 + lambda) * n - 1e-9));
    const auto g = dense_random_graph(n, lambda, seed);
    expect_well_formed(g);
    for (int v = 0; v < n; ++v) {
      ASSERT_GE(g.left_degree(v), threshold) << "n=" << n << " lambda=" << lambda;
      ASSERT_GE(g.right_degree(v), threshold) << "n=" << n << " lambda=" << lambda;
    }
  }
}

TEST(DenseRandom, RejectsBadLambda) {
  EXPECT_THROW(dense_random_graph(10, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(dense_random_graph(10, 0.5, 1), std::invalid_argument);
}

TEST(Sbm, ExtremeProbabilities) {
  EXPECT_EQ(sbm_graph({2, 3}, {3, 2}, {{1, 1}, {1, 1}}, 1), complete_graph(5));
  EXPECT_EQ(sbm_graph({2, 3}, {3, 2}, {{0, 0}, {0, 0}}, 1).edge_count(), 0u);
}

TEST(Sbm, SeededAndNearExpectedDensity) {
  const auto g = sbm_graph({10, 10}, {10, 10}, {{0.9, 0.9}, {0.9, 0.2}}, 7);
  expect_well_formed(g);
  EXPECT_EQ(g, sbm_graph({10, 10}, {10, 10}, {{0.9, 0.9}, {0.9, 0.2}}, 7));
  const double expected = 300 * 0.9 + 100 * 0.2;
  EXPECT_NEAR(static_cast<double>(g.edge_count()), expected, 4 * std::sqrt(expected));
  EXPECT_EQ(sbm_two_cluster_graph(20, 0.9, 0.2, 7), g);
}

TEST(Sbm, RejectsMismatchedShapes) {
  EXPECT_THROW(sbm_graph({2}, {3}, {{1}}, 1), std::invalid_argument);
  EXPECT_THROW(sbm_graph({2}, {2}, {{1.5}}, 1), std::invalid_argument);
}

TEST(Parse, EdgeList) {
  EXPECT_EQ(parse_graph(std::string("2 2\n0 0\n1 1\n")), from_dense_rows({{1, 0}, {0, 1}}));
}

TEST(Parse, IndexOutOfRangeNamesLine) {
  try {
    parse_graph(std::string("2 1\n0 5\n"));
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_NE(std::string(e.what()).find("index out of range, line 2"), std::string::npos);
  }
}

TEST(Parse, DenseFormat) {
  const auto g = parse_graph(std::string("dense 2\n1 1\n0 1\n"));
  EXPECT_EQ(g, from_dense_rows({{1, 1}, {0, 1}}));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_graph(std::string("")), ParseError);
  EXPECT_THROW(parse_graph(std::string("2 2\n0 0\n")), ParseError);
  EXPECT_THROW(parse_graph(std::string("2 2\n0 0\n0 0\n")), ParseError);
  EXPECT_THROW(parse_graph(std::string("2 1\n0 x\n")), ParseError);
  EXPECT_THROW(parse_graph(std::string("dense 2\n1 1\n")), ParseError);
  EXPECT_THROW(parse_graph(std::string("2 1\n0 0\n")), std::invalid_argument);
  EXPECT_NO_THROW(parse_graph(std::string("2 1\n0 0\n"), IsolatedVertices::allow));
}

TEST(RoundTrip, BothFormats) {
  const auto k33 = complete_graph(3);
  EXPECT_EQ(parse_graph(format_graph(k33)), k33);
  const auto g = dense_random_graph(12, 0.2, 9);
  EXPECT_EQ(parse_graph(format_graph(g, GraphFormat::dense)), g);
  const auto path = (std::filesystem::temp_directory_path() / "permcount_graph_rt.txt").string();
  write_graph(g, path);
  EXPECT_EQ(read_graph(path), g);
  std::remove(path.c_str());
}

TEST(Generate, DispatchesFamilies) {
  GraphGenSpec spec;
  spec.family = GraphFamily::fibonacci;
  spec.n = 4;
  EXPECT_EQ(generate(spec), fibonacci_graph(4));
  spec.family = GraphFamily::appendix_b;
  EXPECT_EQ(generate(spec), appendix_b_graph(4));
  spec.family = GraphFamily::dense_random;
  spec.lambda = 0.2;
  spec.seed = 5;
  EXPECT_EQ(generate(spec), dense_random_graph(4, 0.2, 5));
}

}  // namespace
}  // namespace permcount
