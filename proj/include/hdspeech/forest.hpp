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
 * @file forest.hpp
 * @brief Random forest of Gini-split axis-aligned decision trees.
 *
 * Each tree is grown on a bootstrap sample drawn from its own substream
 * derive_seed(seed, {tree}), so a forest is a pure function of its inputs and
 * seed. Candidate thresholds are midpoints between consecutive distinct
 * values; rows go left when value <= threshold. Leaves and the forest both
 * break exact vote ties in favour of PD.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hdspeech/error.hpp"
#include "hdspeech/features.hpp"
#include "hdspeech/seeding.hpp"

namespace hdspeech {

struct ForestParams {
  int n_trees = 300;
  int min_leaf = 1;
  int features_per_split = 0;  // 0 -> floor(sqrt(d))

  int resolved_features_per_split(std::size_t d) const {
    const int k = features_per_split > 0 ? features_per_split
                                         : static_cast<int>(std::floor(std::sqrt(static_cast<double>(d))));
    return std::clamp(k, 1, static_cast<int>(d));
  }
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int hc_count = 0;
  int pd_count = 0;

  bool is_leaf() const noexcept { return feature < 0; }
};

class DecisionTree {
 public:
  std::vector<TreeNode> nodes;

  /// Leaf reached by a row of `d` values.
  const TreeNode& leaf_for(std::span<const double> row) const {
    int at = 0;
    while (!nodes[static_cast<std::size_t>(at)].is_leaf()) {
      const TreeNode& n = nodes[static_cast<std::size_t>(at)];
      at = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(at)];
  }

  Label vote(std::span<const double> row) const {
    const TreeNode& leaf = leaf_for(row);
    return leaf.pd_count >= leaf.hc_count ? Label::kPD : Label::kHC;
  }
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<std::uint64_t> tree_seeds;
  int features_per_split = 1;
  std::vector<std::string> trained_feature_names;
};

struct Prediction {
  std::vector<Label> labels;
  std::vector<double> pd_fraction;
};

/// Row-major dense view used by the learner internals; no missing values.
struct DenseData {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> x;
  std::vector<std::uint8_t> y;  // 1 = PD

  std::span<const double> row(std::size_t i) const { return {x.data() + i * d, d}; }
};

inline DenseData to_dense(const FeatureMatrix& m) {
  m.validate();
  DenseData out;
  out.n = m.row_count();
  out.d = m.feature_count();
  out.x.reserve(out.n * out.d);
  out.y.reserve(out.n);
  for (const auto& r : m.rows) {
    for (double v : r.values) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "forest input must be finite (impute first)");
      out.x.push_back(v);
    }
    out.y.push_back(r.label == Label::kPD ? 1 : 0);
  }
  return out;
}

namespace detail {

inline DecisionTree grow_tree(const DenseData& data, int min_leaf, int mtry, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> draw(0, data.n - 1);
  std::vector<std::size_t> idx(data.n);
  for (auto& i : idx) i = draw(rng);

  std::vector<std::size_t> features(data.d);
  std::iota(features.begin(), features.end(), 0);
  std::vector<std::pair<double, std::uint8_t>> scratch;
  scratch.reserve(data.n);

  DecisionTree tree;
  struct Job {
    int node;
    std::size_t lo, hi;
  };
  std::vector<Job> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, 0, idx.size()});

  while (!stack.empty()) {
    const Job job = stack.back();
    stack.pop_back();
    int pd = 0;
    for (std::size_t k = job.lo; k < job.hi; ++k) pd += data.y[idx[k]];
    const int count = static_cast<int>(job.hi - job.lo);
    {
      TreeNode& node = tree.nodes[static_cast<std::size_t>(job.node)];
      node.pd_count = pd;
      node.hc_count = count - pd;
    }
    if (pd == 0 || pd == count || count < 2 * min_leaf) continue;

    const double n = count;
    const double parent = n - (static_cast<double>(pd) * pd + static_cast<double>(count - pd) * (count - pd)) / n;
    double best_score = parent - 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;

    // Partial Fisher-Yates: the first mtry slots become this node's candidates.
    for (int c = 0; c < mtry; ++c) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(c), data.d - 1);
      std::swap(features[static_cast<std::size_t>(c)], features[pick(rng)]);
    }
    for (int c = 0; c < mtry; ++c) {
      const std::size_t f = features[static_cast<std::size_t>(c)];
      scratch.clear();
      for (std::size_t k = job.lo; k < job.hi; ++k) {
        scratch.emplace_back(data.x[idx[k] * data.d + f], data.y[idx[k]]);
      }
      std::sort(scratch.begin(), scratch.end());
      double l0 = 0.0, l1 = 0.0;
      const double t1 = pd, t0 = count - pd;
      for (std::size_t m = 0; m + 1 < scratch.size(); ++m) {
        (scratch[m].second ? l1 : l0) += 1.0;
        if (!(scratch[m].first < scratch[m + 1].first)) continue;
        const double nl = static_cast<double>(m + 1);
        const double nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double r0 = t0 - l0, r1 = t1 - l1;
        const double score = nl - (l0 * l0 + l1 * l1) / nl + nr - (r0 * r0 + r1 * r1) / nr;
        if (score < best_score) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (scratch[m].first + scratch[m + 1].first);
        }
      }
    }
    if (best_feature < 0) continue;

    const auto f = static_cast<std::size_t>(best_feature);
    const auto mid = std::partition(idx.begin() + static_cast<long>(job.lo), idx.begin() + static_cast<long>(job.hi),
                                    [&](std::size_t i) { return data.x[i * data.d + f] <= best_threshold; });
    const auto split = static_cast<std::size_t>(mid - idx.begin());
    const int left = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes[static_cast<std::size_t>(job.node)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = left + 1;
    stack.push_back({left + 1, split, job.hi});
    stack.push_back({left, job.lo, split});
  }
  return tree;
}

}  // namespace detail

inline ForestModel train_forest(const DenseData& data, std::vector<std::string> feature_names,
                                const ForestParams& params, std::uint64_t seed) {
  if (data.n == 0 || data.d == 0) throw Error(ErrorCode::kInvalidArgument, "empty training data");
  const auto pd = std::count(data.y.begin(), data.y.end(), std::uint8_t{1});
  if (pd == 0 || static_cast<std::size_t>(pd) == data.n) {
    throw Error(ErrorCode::kSingleClass, "training data holds a single class");
  }
  if (params.n_trees < 1 || params.min_leaf < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_trees and min_leaf must be positive");
  }
  ForestModel model;
  model.features_per_split = params.resolved_features_per_split(data.d);
  model.trained_feature_names = std::move(feature_names);
  model.trees.reserve(static_cast<std::size_t>(params.n_trees));
  for (int t = 0; t < params.n_trees; ++t) {
    const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(t)});
    model.tree_seeds.push_back(s);
    model.trees.push_back(detail::grow_tree(data, params.min_leaf, model.features_per_split, s));
  }
  return model;
}

inline ForestModel train_forest(const FeatureMatrix& x, const ForestParams& params, std::uint64_t seed) {
  return train_forest(to_dense(x), x.feature_names, params, seed);
}

/// Majority of tree votes; an exact tie goes to PD.
inline Prediction predict(const ForestModel& model, const DenseData& data) {
  if (data.d != model.trained_feature_names.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "feature count differs from the trained model");
  }
  Prediction out;
  out.labels.reserve(data.n);
  out.pd_fraction.reserve(data.n);
  for (std::size_t i = 0; i < data.n; ++i) {
    std::size_t pd = 0;
    for (const auto& tree : model.trees) pd += tree.vote(data.row(i)) == Label::kPD;
    const std::size_t trees = model.trees.size();
    out.labels.push_back(2 * pd >= trees ? Label::kPD : Label::kHC);
    out.pd_fraction.push_back(static_cast<double>(pd) / static_cast<double>(trees));
  }
  return out;
}

inline Prediction predict(const ForestModel& model, const FeatureMatrix& x) {
  if (x.feature_names != model.trained_feature_names) {
    throw Error(ErrorCode::kSchemaMismatch, "feature names differ from the trained model");
  }
  return predict(model, to_dense(x));
}

}  // namespace hdspeech
