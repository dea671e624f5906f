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

#ifndef PERMCOUNT_SBM_HPP
#define PERMCOUNT_SBM_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "permcount/estimate.hpp"
#include "permcount/graph.hpp"
#include "permcount/rng.hpp"
#include "permcount/sis.hpp"

namespace permcount {

struct TracePoint {
  std::uint64_t samples = 0;
  LogScalar estimate;
};

/// Running mean of the weights after every `stride` samples, plus the final
/// prefix when N is not a multiple of stride.
inline std::vector<TracePoint> trace(std::span<const double> log_weights, std::uint64_t stride) {
  if (stride < 1) {
    throw std::invalid_argument("trace stride must be >= 1");
  }
  std::vector<TracePoint> out;
  EstimateAccumulator acc;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    acc.add(log_weights[i]);
    const std::uint64_t prefix = i + 1;
    if (prefix % stride == 0 || prefix == log_weights.size()) {
      out.push_back({prefix, LogScalar::from_log(acc.log_mean())});
    }
  }
  return out;
}

inline constexpr std::uint64_t kScaledSeedTag = 1;
inline constexpr std::uint64_t kUniformSeedTag = 2;

struct ComparisonReport {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  EstimateReport scaled;
  EstimateReport uniform;
  /// Uniform-mode sample std over scaled-mode sample std. 1 when both are
  /// zero; empty when only the scaled one is, or when there is no perfect
  /// matching.
  std::optional<double> std_ratio;
  std::vector<TracePoint> scaled_trace;
  std::vector<TracePoint> uniform_trace;
};

/// Scaled and uniform SIS on the same graph with equal N and seeds derived
/// from `seed`. `trace_stride` of 0 skips the traces.
inline ComparisonReport compare_modes(const BipartiteGraph& g, std::uint64_t samples,
                                      std::uint64_t seed, int workers = 1,
                                      std::uint64_t trace_stride = 0,
                                      const SinkhornOptions& sinkhorn = {}) {
  ComparisonReport r;
  r.samples = samples;
  r.seed = seed;
  std::vector<double> scaled_lw;
  std::vector<double> uniform_lw;
  const bool keep = trace_stride > 0;
  r.scaled = estimate_count(g, samples, derive_seed(seed, kScaledSeedTag),
                            {WeightMode::scaled, sinkhorn, workers}, keep ? &scaled_lw : nullptr);
  r.uniform =
      estimate_count(g, samples, derive_seed(seed, kUniformSeedTag),
                     {WeightMode::uniform, sinkhorn, workers}, keep ? &uniform_lw : nullptr);
  if (keep) {
    r.scaled_trace = trace(scaled_lw, trace_stride);
    r.uniform_trace = trace(uniform_lw, trace_stride);
  }
  if (!r.scaled.estimate.is_zero()) {
    const bool scaled_zero = r.scaled.sample_std.is_zero();
    const bool uniform_zero = r.uniform.sample_std.is_zero();
    if (scaled_zero && uniform_zero) {
      r.std_ratio = 1.0;
    } else if (!scaled_zero) {
      r.std_ratio = uniform_zero ? 0.0
                                 : std::pow(10.0, r.uniform.sample_std.log10_abs -
                                                      r.scaled.sample_std.log10_abs);
    }
  }
  return r;
}

}  // namespace permcount

#endif  // PERMCOUNT_SBM_HPP
