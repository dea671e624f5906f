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

#ifndef PERMCOUNT_SCALING_HPP
#define PERMCOUNT_SCALING_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "permcount/graph.hpp"
#include "permcount/matching.hpp"

namespace permcount {

/// Dense n x n edge weights, zero off the edge set.
struct EdgeWeights {
  int n = 0;
  std::vector<double> values;
  /// False for the unscaled all-ones weights, whose row sums are degrees.
  bool normalized = false;

  double operator()(int row, int col) const {
    return values[static_cast<std::size_t>(row) * n + col];
  }
  double& operator()(int row, int col) { return values[static_cast<std::size_t>(row) * n + col]; }
};

/// Doubly stochastic scaling Q = D_alpha A D_beta of a 0/1 matrix.
struct ScaledMatrix {
  EdgeWeights q;
  std::vector<double> alpha;
  std::vector<double> beta;
  int iterations = 0;
  /// Max deviation of any row or column sum from 1.
  double residual = 0.0;
};

struct SinkhornOptions {
  double tol = 1e-10;
  int max_iters = 100000;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(int iterations, double residual)
      : std::runtime_error("sinkhorn did not converge after " + std::to_string(iterations) +
                           " iterations (residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Weight 1 on every edge.
inline EdgeWeights uniform_weights(const BipartiteGraph& g) {
  EdgeWeights w{g.size(), std::vector<double>(static_cast<std::size_t>(g.size()) * g.size(), 0.0),
                false};
  for (const Edge& e : g.edges()) {
    w(e.left, e.right) = 1.0;
  }
  return w;
}

/// Subgraph of edges lying on at least one perfect matching. The permanent
/// is unchanged and the result has total support.
inline BipartiteGraph prune_non_extendable(const BipartiteGraph& g) {
  const auto pm = find_perfect_matching(g);
  if (!pm) {
    throw std::invalid_argument("graph has no perfect matching");
  }
  return {g.size(), extendable_edges(g, *pm)};
}

/// Classical Sinkhorn iteration: alternately normalise rows then columns,
/// starting from the 0/1 incidence, until every row and column sum is within
/// `tol` of 1. Converges when the graph has total support; prune first.
inline ScaledMatrix sinkhorn(const BipartiteGraph& g, const SinkhornOptions& options = {}) {
  const int n = g.size();
  if (n == 0 || !find_perfect_matching(g)) {
    throw std::invalid_argument("graph has no perfect matching");
  }
  if (!(options.tol > 0.0) || options.max_iters < 1) {
    throw std::invalid_argument("sinkhorn needs tol > 0 and max_iters >= 1");
  }
  ScaledMatrix out;
  out.alpha.assign(n, 1.0);
  out.beta.assign(n, 1.0);
  auto& alpha = out.alpha;
  auto& beta = out.beta;
  double residual = std::numeric_limits<double>::infinity();
  int iter = 0;
  while (iter < options.max_iters) {
    ++iter;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j : g.right_neighbors(i)) {
        s += beta[j];
      }
      alpha[i] = 1.0 / s;
    }
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i : g.left_neighbors(j)) {
        s += alpha[i];
      }
      beta[j] = 1.0 / s;
    }
    residual = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j : g.right_neighbors(i)) {
        s += alpha[i] * beta[j];
      }
      residual = std::max(residual, std::abs(s - 1.0));
    }
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i : g.left_neighbors(j)) {
        s += alpha[i] * beta[j];
      }
      residual = std::max(residual, std::abs(s - 1.0));
    }
    if (residual <= options.tol) {
      break;
    }
  }
  if (!(residual <= options.tol)) {
    throw ConvergenceError(iter, residual);
  }
  out.iterations = iter;
  out.residual = residual;
  out.q = EdgeWeights{n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0), true};
  for (const Edge& e : g.edges()) {
    out.q(e.left, e.right) = alpha[e.left] * beta[e.right];
  }
  return out;
}

}  // namespace permcount

#endif  // PERMCOUNT_SCALING_HPP
