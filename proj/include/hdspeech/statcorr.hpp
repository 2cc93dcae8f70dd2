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
 * @file statcorr.hpp
 * @brief Pearson and Spearman correlation of features against the binary
 * clinical label, with two-tailed Student-t significance.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "hdspeech/error.hpp"
#include "hdspeech/features.hpp"

namespace hdspeech {

inline constexpr double kSignificanceAlpha = 0.05;

struct Correlation {
  double r = 0.0;
  double p = 1.0;
};

/// Two-tailed p of correlation r over n samples via t = r sqrt((n-2)/(1-r^2)).
inline double correlation_p_value(double r, std::size_t n) {
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "need at least 3 samples");
  const double ar = std::abs(r);
  if (ar >= 1.0 - 1e-15) return 0.0;
  const double df = static_cast<double>(n) - 2.0;
  const double t = ar * std::sqrt(df / (1.0 - r * r));
  boost::math::students_t dist(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, t)), 0.0, 1.0);
}

namespace detail {

inline void drop_missing_pairs(std::span<const double> x, std::span<const double> y,
                               std::vector<double>& xs, std::vector<double>& ys) {
  if (x.size() != y.size()) throw Error(ErrorCode::kInvalidArgument, "length mismatch");
  xs.clear();
  ys.clear();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isnan(x[i]) && !std::isnan(y[i])) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  }
  if (xs.size() < 3) throw Error(ErrorCode::kInvalidArgument, "fewer than 3 complete pairs");
}

inline double pearson_r(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(ErrorCode::kZeroVariance, "constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace detail

/// 1-based ranks with ties sharing their average rank.
inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline Correlation pearson(std::span<const double> x, std::span<const double> y) {
  std::vector<double> xs, ys;
  detail::drop_missing_pairs(x, y, xs, ys);
  const double r = detail::pearson_r(xs, ys);
  return {r, correlation_p_value(r, xs.size())};
}

/// Spearman's rho. p is exact (full permutation enumeration) for n <= 10 and
/// the t approximation otherwise.
inline Correlation spearman(std::span<const double> x, std::span<const double> y) {
  std::vector<double> xs, ys;
  detail::drop_missing_pairs(x, y, xs, ys);
  const auto rx = average_ranks(xs);
  auto ry = average_ranks(ys);
  const double r = detail::pearson_r(rx, ry);
  if (xs.size() > 10) return {r, correlation_p_value(r, xs.size())};

  std::sort(ry.begin(), ry.end());
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  const double denom = std::sqrt(sxx * syy);
  const double threshold = std::abs(r) - 1e-12;
  std::size_t extreme = 0, total = 0;
  do {
    double sxy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) sxy += (rx[i] - mx) * (ry[i] - my);
    extreme += std::abs(sxy / denom) >= threshold;
    ++total;
  } while (std::next_permutation(ry.begin(), ry.end()));
  // next_permutation skips duplicate arrangements of tied ranks; each distinct
  // arrangement stands for the same number of raw permutations, so the ratio
  // is unchanged.
  return {r, static_cast<double>(extreme) / static_cast<double>(total)};
}

struct CorrelationResult {
  std::string feature;
  double r_p = 0.0;
  double p_p = 1.0;
  double r_s = 0.0;
  double p_s = 1.0;
  std::size_t n = 0;
  bool significant_at_alpha = false;
  bool zero_variance = false;
};

/// One result per feature against the label (HC = 0, PD = 1), missing values
/// dropped pairwise. Ranked by |r_s| descending; zero-variance features are
/// flagged and listed after the ranked ones.
inline std::vector<CorrelationResult> correlate_features(const FeatureMatrix& matrix) {
  matrix.validate();
  if (matrix.row_count() < 3) throw Error(ErrorCode::kInvalidArgument, "need at least 3 rows");
  if (matrix.count(Label::kPD) == 0 || matrix.count(Label::kHC) == 0) {
    throw Error(ErrorCode::kSingleClass, "both PD and HC rows are required");
  }
  std::vector<double> labels(matrix.row_count());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = matrix.rows[i].label == Label::kPD ? 1.0 : 0.0;

  std::vector<CorrelationResult> ranked, flagged;
  for (std::size_t j = 0; j < matrix.feature_count(); ++j) {
    CorrelationResult res;
    res.feature = matrix.feature_names[j];
    const auto col = matrix.column(j);
    res.n = static_cast<std::size_t>(std::count_if(col.begin(), col.end(), [](double v) { return !std::isnan(v); }));
    try {
      const auto p = pearson(col, labels);
      const auto s = spearman(col, labels);
      res.r_p = p.r;
      res.p_p = p.p;
      res.r_s = s.r;
      res.p_s = s.p;
      res.significant_at_alpha = p.p < kSignificanceAlpha;
      ranked.push_back(std::move(res));
    } catch (const Error&) {
      // constant column, or too few values / a single class after dropping
      res.zero_variance = true;
      res.r_p = res.r_s = kMissing;
      res.p_p = res.p_s = kMissing;
      flagged.push_back(std::move(res));
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.r_s) > std::abs(b.r_s); });
  ranked.insert(ranked.end(), flagged.begin(), flagged.end());
  return ranked;
}

}  // namespace hdspeech
