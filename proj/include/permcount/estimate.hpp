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

#ifndef PERMCOUNT_ESTIMATE_HPP
#define PERMCOUNT_ESTIMATE_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * \file
 * \brief Log-space accumulation of importance weights and the derived reports.
 *
 * SIS weights span hundreds of orders of magnitude, so every weight is held
 * as its natural log. Sums are stored relative to a running maximum.
 */

namespace permcount {

inline constexpr double kLn10 = 2.302585092994045684;

/// Signed real stored as sign and log10 of its magnitude.
struct LogScalar {
  int sign = 0;  // -1, 0 or +1
  double log10_abs = -std::numeric_limits<double>::infinity();

  static LogScalar zero() { return {}; }

  /// exp(log_value), for a natural log.
  static LogScalar from_log(double log_value) {
    if (log_value == -std::numeric_limits<double>::infinity()) {
      return zero();
    }
    return {1, log_value / kLn10};
  }

  /// `scaled * exp(shift)` for a plain double `scaled`.
  static LogScalar from_scaled(double scaled, double shift) {
    if (scaled == 0.0) {
      return zero();
    }
    return {scaled > 0.0 ? 1 : -1, std::log10(std::abs(scaled)) + shift / kLn10};
  }

  bool is_zero() const { return sign == 0; }

  /// May overflow to infinity for very large magnitudes.
  double value() const { return sign == 0 ? 0.0 : sign * std::pow(10.0, log10_abs); }

  /// Decimal rendering with `digits` significant digits: plain notation for
  /// magnitudes in [1e-4, 1e10), otherwise mantissa and exponent
  /// ("2.4433e+230"). Trailing zeros are dropped.
  std::string to_decimal(int digits = 10) const {
    if (sign == 0) {
      return "0";
    }
    std::string out = sign < 0 ? "-" : "";
    char buf[64];
    double exponent = std::floor(log10_abs);
    double mantissa = std::pow(10.0, log10_abs - exponent);
    // Rounding may carry the mantissa to 10.
    std::snprintf(buf, sizeof buf, "%.*f", digits - 1, mantissa);
    if (std::atof(buf) >= 10.0) {
      exponent += 1.0;
      mantissa /= 10.0;
    }
    if (exponent >= -4.0 && exponent < 10.0) {
      std::snprintf(buf, sizeof buf, "%.*g", digits, mantissa * std::pow(10.0, exponent));
      return out + buf;
    }
    std::snprintf(buf, sizeof buf, "%.*f", digits - 1, mantissa);
    std::string m = buf;
    if (m.find('.') != std::string::npos) {
      while (m.back() == '0') {
        m.pop_back();
      }
      if (m.back() == '.') {
        m.pop_back();
      }
    }
    std::snprintf(buf, sizeof buf, "e%+d", static_cast<int>(exponent));
    return out + m + buf;
  }
};

/// Streaming record of log-weights. Holds, relative to the running max
/// log-weight `shift`: sum of w, sum of w^2, sum of w log w, and optional
/// per-functional sums of f * w.
///
/// Mergeable: merge(a, b) reports the same values as accumulating the
/// concatenated stream, up to floating-point rounding.
class EstimateAccumulator {
 public:
  explicit EstimateAccumulator(std::size_t functionals = 0) : func_(functionals, 0.0) {}

  void add(double log_weight) { add_impl(log_weight, nullptr); }

  void add(double log_weight, std::span<const double> f_values) {
    if (f_values.size() != func_.size()) {
      throw std::invalid_argument("functional count mismatch");
    }
    add_impl(log_weight, &f_values);
  }

  /// Adds the sample with f_k = 1 for k in `indices`, 0 elsewhere.
  void add_indicators(double log_weight, std::span<const std::size_t> indices) {
    ++count_;
    if (log_weight == -kInf) {
      return;
    }
    rebase(log_weight);
    const double w = std::exp(log_weight - shift_);
    accumulate(log_weight, w);
    for (std::size_t k : indices) {
      func_[k] += w;
    }
  }

  void merge(const EstimateAccumulator& other) {
    if (other.func_.size() != func_.size()) {
      throw std::invalid_argument("cannot merge accumulators with different functionals");
    }
    count_ += other.count_;
    if (other.shift_ == -kInf) {
      return;
    }
    rebase(other.shift_);
    const double f = std::exp(other.shift_ - shift_);
    sum_ += other.sum_ * f;
    sum_sq_ += other.sum_sq_ * f * f;
    sum_wlogw_ += other.sum_wlogw_ * f;
    for (std::size_t k = 0; k < func_.size(); ++k) {
      func_[k] += other.func_[k] * f;
    }
  }

  std::uint64_t count() const { return count_; }
  std::size_t functional_count() const { return func_.size(); }
  bool has_weight() const { return sum_ > 0.0; }

  /// log of sum w.
  double log_sum() const { return sum_ > 0.0 ? shift_ + std::log(sum_) : -kInf; }
  /// log of (1/N) sum w.
  double log_mean() const {
    return count_ == 0 ? -kInf : log_sum() - std::log(static_cast<double>(count_));
  }
  /// log of sum w^2.
  double log_sum_sq() const { return sum_sq_ > 0.0 ? 2.0 * shift_ + std::log(sum_sq_) : -kInf; }

  /// Self-normalised estimate sum f_k w / sum w.
  double normalized_functional(std::size_t k) const {
    if (!(sum_ > 0.0)) {
      throw std::domain_error("no positive weight accumulated");
    }
    return func_[k] / sum_;
  }

  // Raw scaled sums, exposed for report construction.
  double shift() const { return shift_; }
  double scaled_sum() const { return sum_; }
  double scaled_sum_sq() const { return sum_sq_; }
  double scaled_sum_wlogw() const { return sum_wlogw_; }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  void add_impl(double log_weight, const std::span<const double>* f_values) {
    ++count_;
    if (log_weight == -kInf) {
      return;
    }
    if (std::isnan(log_weight) || log_weight == kInf) {
      throw std::domain_error("log-weight must be finite or -inf");
    }
    rebase(log_weight);
    const double w = std::exp(log_weight - shift_);
    accumulate(log_weight, w);
    if (f_values != nullptr) {
      for (std::size_t k = 0; k < func_.size(); ++k) {
        func_[k] += (*f_values)[k] * w;
      }
    }
  }

  void accumulate(double log_weight, double w) {
    sum_ += w;
    sum_sq_ += w * w;
    sum_wlogw_ += w * log_weight;
  }

  void rebase(double new_log) {
    if (new_log <= shift_) {
      return;
    }
    if (shift_ != -kInf) {
      const double f = std::exp(shift_ - new_log);
      sum_ *= f;
      sum_sq_ *= f * f;
      sum_wlogw_ *= f;
      for (double& v : func_) {
        v *= f;
      }
    }
    shift_ = new_log;
  }

  std::uint64_t count_ = 0;
  double shift_ = -kInf;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
  double sum_wlogw_ = 0.0;
  std::vector<double> func_;
};

inline EstimateAccumulator merge(EstimateAccumulator a, const EstimateAccumulator& b) {
  a.merge(b);
  return a;
}

struct Diagnostics {
  /// (sum w)^2 / sum w^2.
  double ess = 0.0;
  /// (sum w log w) / (sum w) - log((1/N) sum w): plug-in KL(target || proposal).
  double kl_hat = 0.0;
};

inline Diagnostics diagnostics(const EstimateAccumulator& acc) {
  if (acc.count() == 0 || !acc.has_weight()) {
    throw std::domain_error("diagnostics need at least one positive weight");
  }
  const double s = acc.scaled_sum();
  Diagnostics d;
  d.ess = s * s / acc.scaled_sum_sq();
  d.kl_hat = acc.scaled_sum_wlogw() / s - acc.log_mean();
  return d;
}

/// Summary of a Monte Carlo mean with a normal-approximation 95% interval.
struct EstimateReport {
  LogScalar estimate;
  /// Sample standard deviation of the weights.
  LogScalar sample_std;
  /// sample_std / sqrt(N).
  LogScalar std_error;
  LogScalar ci_low;
  LogScalar ci_high;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> ess;
  std::optional<double> kl_hat;
  std::optional<double> sinkhorn_residual;
  double wall_ms = 0.0;
};

inline constexpr double kZ95 = 1.96;

/// Mean, spread and interval of the accumulated weights. Diagnostics are
/// attached when `with_diagnostics` is set and some weight is positive.
inline EstimateReport make_report(const EstimateAccumulator& acc, std::uint64_t seed,
                                  bool with_diagnostics = true) {
  EstimateReport r;
  r.samples = acc.count();
  r.seed = seed;
  if (acc.count() == 0 || !acc.has_weight()) {
    return r;
  }
  const auto n = static_cast<double>(acc.count());
  const double shift = acc.shift();
  const double s = acc.scaled_sum();
  const double mean = s / n;
  double var = 0.0;
  if (acc.count() > 1) {
    var = std::max(0.0, (acc.scaled_sum_sq() - s * s / n) / (n - 1.0));
  }
  const double sd = std::sqrt(var);
  const double se = sd / std::sqrt(n);
  r.estimate = LogScalar::from_log(acc.log_mean());
  r.sample_std = LogScalar::from_scaled(sd, shift);
  r.std_error = LogScalar::from_scaled(se, shift);
  r.ci_low = LogScalar::from_scaled(mean - kZ95 * se, shift);
  r.ci_high = LogScalar::from_scaled(mean + kZ95 * se, shift);
  if (with_diagnostics) {
    const Diagnostics d = diagnostics(acc);
    r.ess = d.ess;
    r.kl_hat = d.kl_hat;
  }
  return r;
}

}  // namespace permcount

#endif  // PERMCOUNT_ESTIMATE_HPP
