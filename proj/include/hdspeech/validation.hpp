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
 * @file validation.hpp
 * @brief Per-feature normalization, stratified fold plans and repeated
 * stratified k-fold cross-validation of the random forest.
 *
 * Every random substream is addressed by indices under the master seed:
 * fold plan of repetition r uses derive_seed(master, {1, r}) and the forest of
 * fold f in repetition r uses derive_seed(master, {2, r, f}).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hdspeech/error.hpp"
#include "hdspeech/features.hpp"
#include "hdspeech/forest.hpp"
#include "hdspeech/functionals.hpp"
#include "hdspeech/metrics.hpp"
#include "hdspeech/parallel.hpp"
#include "hdspeech/seeding.hpp"

namespace hdspeech {

inline constexpr double kMinSigma = 1e-12;

struct ZScoreParams {
  std::vector<std::string> feature_names;
  std::vector<double> median;  // imputation value for missing entries
  std::vector<double> mean;
  std::vector<double> sigma;  // sample standard deviation (n-1)
};

namespace detail {

/// Row-major copy of a matrix that keeps missing values as NaN.
inline DenseData raw_dense(const FeatureMatrix& m) {
  m.validate();
  DenseData out;
  out.n = m.row_count();
  out.d = m.feature_count();
  out.x.reserve(out.n * out.d);
  for (const auto& r : m.rows) {
    out.x.insert(out.x.end(), r.values.begin(), r.values.end());
    out.y.push_back(r.label == Label::kPD ? 1 : 0);
  }
  return out;
}

inline ZScoreParams zscore_fit_rows(const DenseData& raw, std::span<const std::size_t> rows) {
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "empty training matrix");
  ZScoreParams p;
  p.median.resize(raw.d);
  p.mean.resize(raw.d);
  p.sigma.resize(raw.d);
  std::vector<double> col;
  col.reserve(rows.size());
  for (std::size_t j = 0; j < raw.d; ++j) {
    col.clear();
    for (auto i : rows) {
      const double v = raw.x[i * raw.d + j];
      if (!std::isnan(v)) col.push_back(v);
    }
    double med = 0.0;
    if (!col.empty()) {
      std::sort(col.begin(), col.end());
      med = percentile_sorted(col, 50.0);
    }
    double sum = 0.0;
    for (auto i : rows) {
      const double v = raw.x[i * raw.d + j];
      sum += std::isnan(v) ? med : v;
    }
    const double n = static_cast<double>(rows.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (auto i : rows) {
      const double v = raw.x[i * raw.d + j];
      const double dv = (std::isnan(v) ? med : v) - mean;
      ss += dv * dv;
    }
    p.median[j] = med;
    p.mean[j] = mean;
    p.sigma[j] = rows.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return p;
}

inline double zscore_value(const ZScoreParams& p, std::size_t j, double v) {
  if (p.sigma[j] < kMinSigma) return 0.0;
  return ((std::isnan(v) ? p.median[j] : v) - p.mean[j]) / p.sigma[j];
}

inline DenseData zscore_apply_rows(const ZScoreParams& p, const DenseData& raw, std::span<const std::size_t> rows) {
  DenseData out;
  out.n = rows.size();
  out.d = raw.d;
  out.x.reserve(out.n * out.d);
  out.y.reserve(out.n);
  for (auto i : rows) {
    for (std::size_t j = 0; j < raw.d; ++j) out.x.push_back(zscore_value(p, j, raw.x[i * raw.d + j]));
    out.y.push_back(raw.y[i]);
  }
  return out;
}

}  // namespace detail

/// Per-feature training median, mean and sample sigma. The mean and sigma are
/// taken after median imputation.
inline ZScoreParams zscore_fit(const FeatureMatrix& train) {
  const DenseData raw = detail::raw_dense(train);
  std::vector<std::size_t> rows(raw.n);
  std::iota(rows.begin(), rows.end(), 0);
  ZScoreParams p = detail::zscore_fit_rows(raw, rows);
  p.feature_names = train.feature_names;
  return p;
}

/// v -> (v - mean) / sigma with missing v imputed by the training median;
/// features with sigma < 1e-12 map to 0.
inline FeatureMatrix zscore_apply(const ZScoreParams& p, const FeatureMatrix& m) {
  if (m.feature_names != p.feature_names) {
    throw Error(ErrorCode::kSchemaMismatch, "feature names differ from the fitted normalization");
  }
  m.validate();
  FeatureMatrix out = m;
  for (auto& r : out.rows) {
    for (std::size_t j = 0; j < r.values.size(); ++j) r.values[j] = detail::zscore_value(p, j, r.values[j]);
  }
  return out;
}

struct FoldPlan {
  std::vector<int> assignments;
  int k = 10;
  std::uint64_t repetition_seed = 0;

  std::vector<std::size_t> rows_in(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      if (assignments[i] == fold) out.push_back(i);
    }
    return out;
  }
  std::vector<std::size_t> rows_not_in(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      if (assignments[i] != fold) out.push_back(i);
    }
    return out;
  }
};

/// Shuffles each class with its own substream of `seed`, then deals HC rows
/// and then PD rows round-robin over the folds, continuing the deal where the
/// previous class stopped so fold sizes stay within one of each other.
inline FoldPlan stratified_folds(std::span<const Label> labels, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "k must be at least 2");
  FoldPlan plan;
  plan.k = k;
  plan.repetition_seed = seed;
  plan.assignments.assign(labels.size(), -1);
  std::size_t dealt = 0;
  for (Label cls : {Label::kHC, Label::kPD}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    if (members.size() < static_cast<std::size_t>(k)) {
      throw Error(ErrorCode::kClassTooSmall, to_string(cls) + " has " + std::to_string(members.size()) +
                                                 " rows, fewer than k = " + std::to_string(k));
    }
    std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(cls)}));
    for (std::size_t i = members.size(); i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(members[i - 1], members[pick(rng)]);
    }
    for (auto m : members) plan.assignments[m] = static_cast<int>(dealt++ % static_cast<std::size_t>(k));
  }
  return plan;
}

struct Protocol {
  int k = 10;
  int repetitions = 20;
  ForestParams forest;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency; never affects results
};

struct ClassificationReport {
  std::vector<std::string> feature_names;
  int k = 0;
  int repetitions = 0;
  std::uint64_t master_seed = 0;
  std::vector<Confusion> confusions;  // pooled over the folds of each repetition
  std::vector<Metrics> per_repetition;
  Metrics mean;  // headline: mean over repetitions of pooled metrics
  Metrics std;   // sample std over repetitions
  Metrics fold_averaged;  // mean over every (repetition, fold) of per-fold metrics
};

namespace detail {

inline Metrics metrics_mean(std::span<const Metrics> ms) {
  Metrics out;
  for (const auto& m : ms) {
    out.mcc += m.mcc;
    out.acc += m.acc;
    out.sen += m.sen;
    out.spe += m.spe;
  }
  const double n = static_cast<double>(ms.size());
  out.mcc /= n;
  out.acc /= n;
  out.sen /= n;
  out.spe /= n;
  return out;
}

inline Metrics metrics_std(std::span<const Metrics> ms, const Metrics& mean) {
  Metrics out;
  if (ms.size() < 2) return out;
  for (const auto& m : ms) {
    out.mcc += (m.mcc - mean.mcc) * (m.mcc - mean.mcc);
    out.acc += (m.acc - mean.acc) * (m.acc - mean.acc);
    out.sen += (m.sen - mean.sen) * (m.sen - mean.sen);
    out.spe += (m.spe - mean.spe) * (m.spe - mean.spe);
  }
  const double d = static_cast<double>(ms.size()) - 1.0;
  out.mcc = std::sqrt(out.mcc / d);
  out.acc = std::sqrt(out.acc / d);
  out.sen = std::sqrt(out.sen / d);
  out.spe = std::sqrt(out.spe / d);
  return out;
}

inline Confusion fold_confusion(const DenseData& test, const Prediction& pred) {
  Confusion c;
  for (std::size_t i = 0; i < test.n; ++i) {
    const bool truth = test.y[i] == 1;
    const bool said = pred.labels[i] == Label::kPD;
    if (truth && said) ++c.tp;
    else if (truth) ++c.fn;
    else if (said) ++c.fp;
    else ++c.tn;
  }
  return c;
}

/// Cross-validation over a raw (NaN-bearing) dense matrix.
inline ClassificationReport cross_validate_dense(const DenseData& raw, const std::vector<std::string>& names,
                                                 const Protocol& protocol) {
  if (protocol.repetitions < 1) throw Error(ErrorCode::kInvalidArgument, "repetitions must be positive");
  if (raw.d == 0) throw Error(ErrorCode::kInvalidArgument, "no features");
  std::vector<Label> labels(raw.n);
  for (std::size_t i = 0; i < raw.n; ++i) labels[i] = raw.y[i] ? Label::kPD : Label::kHC;

  const auto reps = static_cast<std::size_t>(protocol.repetitions);
  const auto k = static_cast<std::size_t>(protocol.k);
  std::vector<FoldPlan> plans;
  plans.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    plans.push_back(stratified_folds(labels, protocol.k, derive_seed(protocol.master_seed, {1, r})));
  }

  std::vector<Confusion> fold_results(reps * k);
  parallel_for(
      reps * k,
      [&](std::size_t task) {
        const std::size_t r = task / k, f = task % k;
        const auto train_rows = plans[r].rows_not_in(static_cast<int>(f));
        const auto test_rows = plans[r].rows_in(static_cast<int>(f));
        const ZScoreParams z = zscore_fit_rows(raw, train_rows);
        const DenseData train = zscore_apply_rows(z, raw, train_rows);
        const DenseData test = zscore_apply_rows(z, raw, test_rows);
        const ForestModel model = train_forest(train, names, protocol.forest, derive_seed(protocol.master_seed, {2, r, f}));
        fold_results[task] = fold_confusion(test, predict(model, test));
      },
      protocol.threads);

  ClassificationReport rep;
  rep.feature_names = names;
  rep.k = protocol.k;
  rep.repetitions = protocol.repetitions;
  rep.master_seed = protocol.master_seed;
  std::vector<Metrics> per_fold;
  per_fold.reserve(reps * k);
  for (std::size_t r = 0; r < reps; ++r) {
    Confusion pooled;
    for (std::size_t f = 0; f < k; ++f) {
      pooled += fold_results[r * k + f];
      per_fold.push_back(metrics(fold_results[r * k + f]));
    }
    rep.confusions.push_back(pooled);
    rep.per_repetition.push_back(metrics(pooled));
  }
  rep.mean = metrics_mean(rep.per_repetition);
  rep.std = metrics_std(rep.per_repetition, rep.mean);
  rep.fold_averaged = metrics_mean(per_fold);
  return rep;
}

inline DenseData dense_columns(const DenseData& raw, std::span<const std::size_t> cols) {
  DenseData out;
  out.n = raw.n;
  out.d = cols.size();
  out.y = raw.y;
  out.x.reserve(out.n * out.d);
  for (std::size_t i = 0; i < raw.n; ++i) {
    for (auto j : cols) out.x.push_back(raw.x[i * raw.d + j]);
  }
  return out;
}

}  // namespace detail

/// Repeated stratified k-fold validation. Normalization and imputation are fit
/// on the training folds only; each repetition pools its folds into one
/// confusion.
inline ClassificationReport cross_validate(const FeatureMatrix& x, const Protocol& protocol) {
  return detail::cross_validate_dense(detail::raw_dense(x), x.feature_names, protocol);
}

}  // namespace hdspeech
