// Copyright 2026 The hdspeech Authors.
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

/**
 * @file functionals.hpp
 * @brief The fifteen statistical functionals that collapse a contour.
 *
 * Conventions: percentiles interpolate linearly between order statistics at
 * rank (n-1)q/100; std uses n-1; skewness is the biased g1 = m3/m2^1.5;
 * kurtosis is excess (m4/m2^2 - 3); IPR = p95 - p5; sLR is the
 * least-squares slope against frame time in seconds.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hdspeech/contour.hpp"
#include "hdspeech/error.hpp"

namespace hdspeech {

enum class Functional {
  kR, kIPR, kIDR, kIQR, kMean, kMedian, kStd, kSkewness, kKurtosis, kCV, kP5, kQ1, kQ3, kP95, kSLR,
};

inline constexpr std::array<std::string_view, 15> kFunctionalNames = {
    "R", "IPR", "IDR", "IQR", "mean", "median", "std", "skewness",
    "kurtosis", "CV", "p5", "q1", "q3", "p95", "sLR"};

inline constexpr std::size_t kMinDefinedValues = 3;

/// Fifteen functionals of one contour. `valid` is false when the contour had
/// fewer than three defined values; CV alone can be missing (|mean| < 1e-12).
struct FunctionalSet {
  bool valid = false;
  std::array<std::optional<double>, 15> values{};

  std::optional<double> operator[](Functional f) const { return values[static_cast<std::size_t>(f)]; }
  double at(Functional f) const {
    const auto v = (*this)[f];
    if (!v) throw Error(ErrorCode::kInvalidArgument, "functional is missing");
    return *v;
  }
};

/// Percentile q in [0, 100] of already ascending values.
inline double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::kInvalidArgument, "percentile of empty input");
  if (!(q >= 0.0 && q <= 100.0)) throw Error(ErrorCode::kInvalidArgument, "percentile outside [0, 100]");
  const double h = static_cast<double>(sorted.size() - 1) * q / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double percentile(std::span<const double> values, double q) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return percentile_sorted(v, q);
}

/// Functionals of explicit (time, value) samples.
inline FunctionalSet functionals_of(std::span<const double> times, std::span<const double> values) {
  FunctionalSet out;
  const std::size_t n = values.size();
  if (n < kMinDefinedValues || times.size() != n) return out;
  out.valid = true;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto pct = [&](double q) { return percentile_sorted(sorted, q); };

  const double dn = static_cast<double>(n);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= dn;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double sum_sq = m2;
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  const double std_dev = std::sqrt(sum_sq / (dn - 1.0));
  // Spread below rounding noise of the mean counts as a constant contour.
  const double scale = std::max(std::abs(mean), sorted.back() - sorted.front());
  const bool flat = !(m2 > 1e-24 * scale * scale) || m2 == 0.0;

  double t_mean = 0.0;
  for (double t : times) t_mean += t;
  t_mean /= dn;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = times[i] - t_mean;
    sxx += dt * dt;
    sxy += dt * (values[i] - mean);
  }

  auto set = [&](Functional f, std::optional<double> v) { out.values[static_cast<std::size_t>(f)] = v; };
  set(Functional::kR, sorted.back() - sorted.front());
  set(Functional::kIPR, pct(95) - pct(5));
  set(Functional::kIDR, pct(90) - pct(10));
  set(Functional::kIQR, pct(75) - pct(25));
  set(Functional::kMean, mean);
  set(Functional::kMedian, pct(50));
  set(Functional::kStd, flat ? 0.0 : std_dev);
  set(Functional::kSkewness, flat ? 0.0 : m3 / std::pow(m2, 1.5));
  set(Functional::kKurtosis, flat ? 0.0 : m4 / (m2 * m2) - 3.0);
  if (std::abs(mean) >= 1e-12) set(Functional::kCV, flat ? 0.0 : std_dev / mean);
  set(Functional::kP5, pct(5));
  set(Functional::kQ1, pct(25));
  set(Functional::kQ3, pct(75));
  set(Functional::kP95, pct(95));
  set(Functional::kSLR, sxx > 0.0 ? sxy / sxx : 0.0);
  return out;
}

/// Functionals over the defined frames of a contour.
inline FunctionalSet apply_functionals(const Contour& contour) {
  std::vector<double> t, v;
  for (std::size_t i = 0; i < contour.size(); ++i) {
    if (contour.values[i]) {
      t.push_back(i < contour.frame_start_s.size() ? contour.frame_start_s[i] : static_cast<double>(i));
      v.push_back(*contour.values[i]);
    }
  }
  return functionals_of(t, v);
}

}  // namespace hdspeech
