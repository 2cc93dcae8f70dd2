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

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace hdspeech;
using namespace hdspeech::testing;
using Catch::Approx;

namespace {

// phi coefficient as the plain correlation of truth and prediction indicators
double phi(const Confusion& c) {
  std::vector<double> truth, said;
  auto push = [&](std::int64_t n, double t, double s) {
    for (std::int64_t i = 0; i < n; ++i) {
      truth.push_back(t);
      said.push_back(s);
    }
  };
  push(c.tp, 1, 1);
  push(c.fn, 1, 0);
  push(c.fp, 0, 1);
  push(c.tn, 0, 0);
  const double n = static_cast<double>(truth.size());
  const double mt = static_cast<double>(c.tp + c.fn) / n;
  const double ms = static_cast<double>(c.tp + c.fp) / n;
  double st = 0, ss = 0, sts = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    st += (truth[i] - mt) * (truth[i] - mt);
    ss += (said[i] - ms) * (said[i] - ms);
    sts += (truth[i] - mt) * (said[i] - ms);
  }
  return st > 0 && ss > 0 ? sts / std::sqrt(st * ss) : 0.0;
}

FeatureMatrix separable(std::size_t n_pd, std::size_t n_hc, std::uint64_t seed) {
  FeatureMatrix m = noise_matrix(n_pd, n_hc, 3, seed);
  for (auto& r : m.rows) r.values[1] += r.label == Label::kPD ? 6.0 : -6.0;
  return m;
}

FeatureMatrix shuffled_labels(FeatureMatrix m, std::uint64_t seed) {
  std::vector<Label> labels;
  for (const auto& r : m.rows) labels.push_back(r.label);
  std::mt19937_64 rng(seed);
  std::shuffle(labels.begin(), labels.end(), rng);
  for (std::size_t i = 0; i < labels.size(); ++i) m.rows[i].label = labels[i];
  return m;
}

Protocol small_protocol(int trees, int reps, std::uint64_t seed) {
  Protocol p;
  p.k = 10;
  p.repetitions = reps;
  p.forest.n_trees = trees;
  p.master_seed = seed;
  return p;
}

}  // namespace

TEST_CASE("metrics", "[learner]") {
  const Metrics m = metrics({4, 1, 3, 2});
  CHECK(m.mcc == Approx(0.4082482904638631).epsilon(1e-12));
  CHECK(m.acc == Approx(0.7));
  CHECK(m.sen == Approx(2.0 / 3.0));
  CHECK(m.spe == Approx(0.75));

  const Metrics perfect = metrics({10, 0, 10, 0});
  CHECK(perfect.mcc == 1.0);
  CHECK(metrics({0, 10, 0, 10}).mcc == -1.0);
  const Metrics all_pd = metrics({5, 5, 0, 0});
  CHECK(all_pd.mcc == 0.0);
  CHECK(all_pd.spe == 0.0);
  CHECK(metrics({0, 3, 3, 0}).sen == 0.0);
  CHECK_THROWS_AS(metrics({0, 0, 0, 0}), Error);
  CHECK_THROWS_AS(metrics({-1, 2, 2, 2}), Error);
}

TEST_CASE("metrics over every small confusion", "[learner][property]") {
  int checked = 0;
  for (int tp = 0; tp <= 20; ++tp) {
    for (int fp = 0; tp + fp <= 20; ++fp) {
      for (int tn = 0; tp + fp + tn <= 20; ++tn) {
        for (int fn = 0; tp + fp + tn + fn <= 20; ++fn) {
          if (tp + fp + tn + fn == 0) continue;
          const Confusion c{tp, fp, tn, fn};
          const Metrics m = metrics(c);
          REQUIRE(m.mcc == Approx(phi(c)).margin(1e-12));
          REQUIRE(m.mcc >= -1.0);
          REQUIRE(m.mcc <= 1.0);
          REQUIRE(m.acc * c.total() == Approx(tp + tn));
          // relabelling PD <-> HC keeps MCC and swaps SEN and SPE
          const Metrics s = metrics({tn, fn, tp, fp});
          REQUIRE(s.mcc == Approx(m.mcc).margin(1e-12));
          REQUIRE(s.sen == m.spe);
          REQUIRE(s.spe == m.sen);
          // flipping every prediction negates MCC
          REQUIRE(metrics({fn, tn, fp, tp}).mcc == Approx(-m.mcc).margin(1e-12));
          ++checked;
        }
      }
    }
  }
  CHECK(checked == 10625);
}

TEST_CASE("zscore", "[learner]") {
  FeatureMatrix train;
  train.feature_names = {"a", "b", "c"};
  train.rows = {{"1", Label::kPD, {1.0, 5.0, 2.0}},
                {"2", Label::kHC, {2.0, 5.0, kMissing}},
                {"3", Label::kPD, {3.0, 5.0, 4.0}},
                {"4", Label::kHC, {6.0, 5.0, 9.0}}};
  const ZScoreParams p = zscore_fit(train);
  CHECK(p.mean[0] == Approx(3.0));
  CHECK(p.sigma[0] == Approx(std::sqrt(14.0 / 3.0)));
  CHECK(p.median[2] == 4.0);
  CHECK(p.mean[2] == Approx(19.0 / 4.0));  // missing entry imputed with 4

  const FeatureMatrix z = zscore_apply(p, train);
  double sum = 0, sq = 0;
  for (const auto& r : z.rows) {
    sum += r.values[0];
    sq += r.values[0] * r.values[0];
    CHECK(r.values[1] == 0.0);  // constant feature
    CHECK_FALSE(std::isnan(r.values[2]));
  }
  CHECK(sum == Approx(0.0).margin(1e-12));
  CHECK(sq / 3.0 == Approx(1.0));
  CHECK(z.rows[1].values[2] == Approx((4.0 - 19.0 / 4.0) / p.sigma[2]));

  FeatureMatrix other = train;
  other.feature_names = {"a", "b", "d"};
  CHECK_THROWS_AS(zscore_apply(p, other), Error);
}

TEST_CASE("stratified folds", "[learner]") {
  std::vector<Label> labels(99, Label::kPD);
  labels.insert(labels.end(), 53, Label::kHC);
  std::mt19937_64 shuffle_rng(3);
  std::shuffle(labels.begin(), labels.end(), shuffle_rng);

  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const FoldPlan plan = stratified_folds(labels, 10, seed);
    REQUIRE(plan.assignments.size() == labels.size());
    std::array<int, 10> pd{}, hc{};
    for (std::size_t i = 0; i < labels.size(); ++i) {
      REQUIRE(plan.assignments[i] >= 0);
      REQUIRE(plan.assignments[i] < 10);
      (labels[i] == Label::kPD ? pd : hc)[static_cast<std::size_t>(plan.assignments[i])]++;
    }
    for (int f = 0; f < 10; ++f) {
      REQUIRE((pd[f] == 9 || pd[f] == 10));
      REQUIRE((hc[f] == 5 || hc[f] == 6));
      const auto size = pd[f] + hc[f];
      REQUIRE((size == 15 || size == 16));
      REQUIRE(plan.rows_in(f).size() + plan.rows_not_in(f).size() == labels.size());
    }
  }
  CHECK(stratified_folds(labels, 10, 7).assignments == stratified_folds(labels, 10, 7).assignments);
  CHECK(stratified_folds(labels, 10, 7).assignments != stratified_folds(labels, 10, 8).assignments);

  std::vector<Label> few(20, Label::kPD);
  few.insert(few.end(), 9, Label::kHC);
  try {
    stratified_folds(few, 10, 1);
    FAIL("small class accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kClassTooSmall);
  }
  CHECK_THROWS_AS(stratified_folds(labels, 1, 1), Error);
}

TEST_CASE("random forest", "[learner]") {
  ForestParams params;
  params.n_trees = 50;

  SECTION("separable data") {
    const FeatureMatrix train = separable(40, 40, 1);
    const FeatureMatrix test = separable(30, 30, 2);
    const Prediction pred = predict(train_forest(train, params, 9), test);
    for (std::size_t i = 0; i < test.row_count(); ++i) CHECK(pred.labels[i] == test.rows[i].label);
  }
  SECTION("determinism") {
    const FeatureMatrix train = noise_matrix(30, 30, 4, 3);
    const FeatureMatrix test = noise_matrix(20, 20, 4, 4);
    const Prediction a = predict(train_forest(train, params, 5), test);
    const Prediction b = predict(train_forest(train, params, 5), test);
    CHECK(a.pd_fraction == b.pd_fraction);
    const Prediction c = predict(train_forest(train, params, 6), test);
    CHECK(a.pd_fraction != c.pd_fraction);
  }
  SECTION("training points are recalled") {
    const FeatureMatrix train = noise_matrix(25, 25, 3, 8);
    const Prediction pred = predict(train_forest(train, params, 2), train);
    int right = 0;
    for (std::size_t i = 0; i < train.row_count(); ++i) right += pred.labels[i] == train.rows[i].label;
    CHECK(right >= 45);
  }
  SECTION("uninformative features") {
    const FeatureMatrix train = noise_matrix(100, 100, 4, 11);
    const FeatureMatrix test = noise_matrix(200, 200, 4, 12);
    const Prediction pred = predict(train_forest(train, params, 3), test);
    Confusion c;
    for (std::size_t i = 0; i < test.row_count(); ++i) {
      const bool t = test.rows[i].label == Label::kPD, s = pred.labels[i] == Label::kPD;
      (t ? (s ? c.tp : c.fn) : (s ? c.fp : c.tn))++;
    }
    CHECK(std::abs(metrics(c).mcc) <= 0.25);
  }
  SECTION("monotone transforms leave the trees unchanged") {
    const FeatureMatrix train = noise_matrix(30, 30, 3, 21);
    FeatureMatrix warped = train;
    for (auto& r : warped.rows) {
      r.values[0] = std::exp(r.values[0]);
      r.values[2] = r.values[2] * r.values[2] * r.values[2] + 4.0;
    }
    const ForestModel a = train_forest(train, params, 4);
    const ForestModel b = train_forest(warped, params, 4);
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
      REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
      for (std::size_t k = 0; k < a.trees[t].nodes.size(); ++k) {
        const TreeNode &x = a.trees[t].nodes[k], &y = b.trees[t].nodes[k];
        CHECK(x.feature == y.feature);
        CHECK(x.left == y.left);
        CHECK(x.pd_count == y.pd_count);
        CHECK(x.hc_count == y.hc_count);
      }
    }
  }
  SECTION("ties go to PD") {
    DecisionTree tree;
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 3, 3});
    const double row[] = {0.0};
    CHECK(tree.vote(row) == Label::kPD);

    ForestModel model;
    model.trained_feature_names = {"x"};
    DecisionTree hc;
    hc.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 2, 1});
    DecisionTree pd;
    pd.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 1, 2});
    model.trees = {hc, pd};
    DenseData d{1, 1, {0.0}, {0}};
    CHECK(predict(model, d).labels[0] == Label::kPD);
    CHECK(predict(model, d).pd_fraction[0] == 0.5);
  }
  SECTION("errors") {
    const FeatureMatrix train = noise_matrix(10, 10, 3, 1);
    const ForestModel model = train_forest(train, params, 1);
    FeatureMatrix renamed = train;
    renamed.feature_names[0] = "other";
    try {
      predict(model, renamed);
      FAIL("schema mismatch accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSchemaMismatch);
    }
    CHECK_THROWS_AS(train_forest(noise_matrix(10, 0, 3, 1), params, 1), Error);
    FeatureMatrix with_nan = train;
    with_nan.rows[0].values[0] = kMissing;
    CHECK_THROWS_AS(train_forest(with_nan, params, 1), Error);
  }
}

TEST_CASE("cross validation", "[learner]") {
  SECTION("separable data") {
    const ClassificationReport rep = cross_validate(separable(50, 50, 4), small_protocol(30, 3, 1));
    CHECK(rep.mean.mcc >= 0.95);
    CHECK(rep.mean.sen >= 0.95);
  }
  SECTION("shuffled labels") {
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const FeatureMatrix m = shuffled_labels(separable(76, 76, 5), 100 + s);
      const ClassificationReport rep = cross_validate(m, small_protocol(50, 2, s));
      CHECK(std::abs(rep.mean.mcc) <= 0.35);
      mean += rep.mean.mcc / 10.0;
    }
    CHECK(std::abs(mean) <= 0.1);
  }
  SECTION("reports are reproducible and independent of threads") {
    FeatureMatrix m = noise_matrix(40, 30, 4, 6);
    m.rows[3].values[1] = kMissing;
    Protocol p = small_protocol(20, 2, 77);
    p.threads = 1;
    const ClassificationReport a = cross_validate(m, p);
    p.threads = 4;
    const ClassificationReport b = cross_validate(m, p);
    CHECK(a.confusions == b.confusions);
    CHECK(a.mean.mcc == b.mean.mcc);
    CHECK(a.std.mcc == b.std.mcc);
    CHECK(a.fold_averaged.acc == b.fold_averaged.acc);
    p.master_seed = 78;
    CHECK(cross_validate(m, p).confusions != a.confusions);
  }
  SECTION("confusion bookkeeping") {
    const FeatureMatrix m = noise_matrix(33, 27, 3, 7);
    const ClassificationReport rep = cross_validate(m, small_protocol(10, 4, 3));
    REQUIRE(rep.confusions.size() == 4);
    REQUIRE(rep.per_repetition.size() == 4);
    double mean = 0;
    for (std::size_t r = 0; r < 4; ++r) {
      const Confusion& c = rep.confusions[r];
      CHECK(c.tp + c.fn == 33);
      CHECK(c.tn + c.fp == 27);
      CHECK(rep.per_repetition[r].mcc == metrics(c).mcc);
      mean += rep.per_repetition[r].mcc / 4.0;
    }
    CHECK(rep.mean.mcc == Approx(mean));
    CHECK(rep.std.mcc >= 0.0);
    CHECK(rep.k == 10);
    CHECK(rep.feature_names == m.feature_names);
  }
}
