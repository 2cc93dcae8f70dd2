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
 * @file sffs.hpp
 * @brief Sequential floating forward selection wrapped around
 * cross_validate.
 *
 * The criterion J(S) is the mean MCC of cross_validate on the columns in S
 * under one fixed protocol, so J is a deterministic function of the subset
 * and is memoized. J of the empty set is -infinity.
 *
 * Each round adds the feature maximizing J. Conditional removals follow: the
 * best removal (excluding the feature just added) is taken while it beats
 * both the current J and the best J recorded at the smaller size, both by
 * more than 1e-9. Selection stops when the subset reaches max_subset, when
 * every feature is in, or after `patience` consecutive rounds that did not
 * raise the best J seen. Ties go to the earlier feature.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "hdspeech/error.hpp"
#include "hdspeech/features.hpp"
#include "hdspeech/validation.hpp"

namespace hdspeech {

inline constexpr double kSffsEpsilon = 1e-9;

struct SffsOptions {
  std::size_t max_subset = 10;
  std::size_t patience = 3;
};

enum class SffsAction { kAdd, kRemove };

inline std::string to_string(SffsAction a) { return a == SffsAction::kAdd ? "add" : "remove"; }

struct SffsStep {
  SffsAction action = SffsAction::kAdd;
  std::string feature;
  std::vector<std::string> subset;  // after the step, in selection order
  double j = 0.0;
  double best_so_far = 0.0;
};

struct SffsResult {
  std::vector<std::string> selected;  // best subset seen, in selection order
  double best_j = 0.0;
  std::vector<SffsStep> trace;
  ClassificationReport report;  // cross_validate of `selected`
  std::size_t evaluations = 0;  // distinct subsets evaluated
};

inline SffsResult sffs(const FeatureMatrix& x, const Protocol& protocol, const SffsOptions& options = {}) {
  if (x.feature_count() < 2) throw Error(ErrorCode::kInvalidArgument, "SFFS needs at least 2 features");
  if (options.max_subset < 1) throw Error(ErrorCode::kInvalidArgument, "max_subset must be at least 1");
  if (options.patience < 1) throw Error(ErrorCode::kInvalidArgument, "patience must be at least 1");
  const DenseData raw = detail::raw_dense(x);
  const std::size_t d = raw.d;

  std::map<std::vector<std::size_t>, ClassificationReport> memo;
  auto evaluate = [&](std::vector<std::size_t> cols) -> const ClassificationReport& {
    std::sort(cols.begin(), cols.end());
    auto it = memo.find(cols);
    if (it == memo.end()) {
      std::vector<std::string> names;
      for (auto j : cols) names.push_back(x.feature_names[j]);
      it = memo.emplace(cols, detail::cross_validate_dense(detail::dense_columns(raw, cols), names, protocol)).first;
    }
    return it->second;
  };
  auto names_of = [&](const std::vector<std::size_t>& cols) {
    std::vector<std::string> out;
    for (auto j : cols) out.push_back(x.feature_names[j]);
    return out;
  };

  const double neg_inf = -std::numeric_limits<double>::infinity();
  const std::size_t limit = std::min(options.max_subset, d);
  std::vector<double> best_at_size(limit + 1, neg_inf);
  std::vector<std::size_t> current;
  std::vector<std::size_t> best_subset;
  double best_j = neg_inf;
  SffsResult result;

  auto record = [&](SffsAction action, std::size_t feature, double j) {
    best_at_size[current.size()] = std::max(best_at_size[current.size()], j);
    if (j > best_j + kSffsEpsilon || best_subset.empty()) {
      best_j = j;
      best_subset = current;
    }
    result.trace.push_back({action, x.feature_names[feature], names_of(current), j, best_j});
  };

  std::size_t stale_rounds = 0;
  while (current.size() < limit) {
    const double best_before = best_j;

    std::size_t pick = d;
    double pick_j = neg_inf;
    for (std::size_t f = 0; f < d; ++f) {
      if (std::find(current.begin(), current.end(), f) != current.end()) continue;
      auto trial = current;
      trial.push_back(f);
      const double j = evaluate(trial).mean.mcc;
      if (pick == d || j > pick_j) {
        pick = f;
        pick_j = j;
      }
    }
    current.push_back(pick);
    double current_j = pick_j;
    record(SffsAction::kAdd, pick, current_j);

    while (current.size() > 2) {
      std::size_t drop = d;
      double drop_j = neg_inf;
      std::vector<std::size_t> order(current.begin(), current.end() - 1);
      std::sort(order.begin(), order.end());
      for (std::size_t g : order) {
        if (g == pick) continue;
        std::vector<std::size_t> trial;
        for (auto c : current) {
          if (c != g) trial.push_back(c);
        }
        const double j = evaluate(trial).mean.mcc;
        if (drop == d || j > drop_j) {
          drop = g;
          drop_j = j;
        }
      }
      if (drop == d || !(drop_j > current_j + kSffsEpsilon) ||
          !(drop_j > best_at_size[current.size() - 1] + kSffsEpsilon)) {
        break;
      }
      current.erase(std::find(current.begin(), current.end(), drop));
      current_j = drop_j;
      record(SffsAction::kRemove, drop, current_j);
    }

    if (best_j > best_before + kSffsEpsilon) {
      stale_rounds = 0;
    } else if (++stale_rounds >= options.patience) {
      break;
    }
  }

  result.selected = names_of(best_subset);
  result.best_j = best_j;
  result.report = evaluate(best_subset);
  result.report.feature_names = result.selected;
  result.evaluations = memo.size();
  return result;
}

}  // namespace hdspeech
