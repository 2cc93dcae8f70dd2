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

#include <fstream>

#include <nlohmann/json.hpp>

#include "support.hpp"

using namespace hdspeech;
using namespace hdspeech::testing;
using Catch::Approx;

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kInvalidArgument;
}

ClassificationReport fake_report(std::vector<std::string> names, double mcc) {
  ClassificationReport r;
  r.feature_names = std::move(names);
  r.k = 10;
  r.repetitions = 2;
  r.master_seed = 3;
  r.confusions = {{8, 2, 7, 3}, {9, 1, 8, 2}};
  for (const auto& c : r.confusions) r.per_repetition.push_back(metrics(c));
  r.mean = {mcc, 0.8, 0.85, 0.75};
  r.std = {0.01, 0.02, 0.03, 0.04};
  r.fold_averaged = {mcc - 0.01, 0.79, 0.84, 0.74};
  return r;
}

}  // namespace

TEST_CASE("manifest round trip", "[io]") {
  TempDir dir("manifest");
  const std::vector<ManifestRow> rows{{"a", "a.wav", Label::kPD}, {"b", "/abs/b.wav", Label::kHC}};
  write_manifest(dir / "m.csv", rows);
  const Manifest m = read_manifest(dir / "m.csv");
  REQUIRE(m.rows.size() == 2);
  CHECK(m.rows[0].id == "a");
  CHECK(m.rows[1].label == Label::kHC);
  CHECK(m.resolve_path(m.rows[0]) == dir / "a.wav");
  CHECK(m.resolve_path(m.rows[1]) == std::filesystem::path("/abs/b.wav"));

  write_file(dir / "crlf.csv", "id,path,label\r\nx,x.wav,PD\r\n\r\n");
  CHECK(read_manifest(dir / "crlf.csv").rows.size() == 1);

  CHECK(code_of([&] { read_manifest(dir / "absent.csv"); }) == ErrorCode::kMissingFile);
  write_file(dir / "h.csv", "name,path,label\nx,x.wav,PD\n");
  CHECK(code_of([&] { read_manifest(dir / "h.csv"); }) == ErrorCode::kMalformedInput);
  write_file(dir / "f.csv", "id,path,label\nx,x.wav\n");
  CHECK(code_of([&] { read_manifest(dir / "f.csv"); }) == ErrorCode::kMalformedInput);
  write_file(dir / "d.csv", "id,path,label\nx,x.wav,PD\nx,y.wav,HC\n");
  CHECK(code_of([&] { read_manifest(dir / "d.csv"); }) == ErrorCode::kMalformedInput);
  write_file(dir / "l.csv", "id,path,label\nx,x.wav,ALS\n");
  CHECK_THROWS_AS(read_manifest(dir / "l.csv"), Error);
  CHECK_THROWS_AS(write_manifest(dir / "bad.csv", {{"a,b", "a.wav", Label::kPD}}), Error);
}

TEST_CASE("features CSV round trip", "[io]") {
  TempDir dir("features");
  FeatureMatrix m = noise_matrix(3, 2, 4, 9);
  m.rows[1].values[2] = kMissing;
  m.rows[0].values[0] = 1.0 / 3.0;
  m.rows[0].values[1] = -1e-300;
  write_features_csv(dir / "f.csv", m);
  const FeatureMatrix back = read_features_csv(dir / "f.csv");
  CHECK(back.feature_names == m.feature_names);
  REQUIRE(back.row_count() == m.row_count());
  for (std::size_t i = 0; i < m.row_count(); ++i) {
    CHECK(back.rows[i].recording_id == m.rows[i].recording_id);
    CHECK(back.rows[i].label == m.rows[i].label);
    for (std::size_t j = 0; j < 4; ++j) {
      if (std::isnan(m.rows[i].values[j])) {
        CHECK(std::isnan(back.rows[i].values[j]));
      } else {
        CHECK(back.rows[i].values[j] == m.rows[i].values[j]);
      }
    }
  }
  const std::string text = features_csv(m);
  CHECK(text.substr(0, text.find('\n')) == "id,label,n0,n1,n2,n3");
  CHECK(text.find(",,") != std::string::npos);

  write_file(dir / "short.csv", "id,label,a,b\nx,PD,1\n");
  CHECK(code_of([&] { read_features_csv(dir / "short.csv"); }) == ErrorCode::kMalformedInput);
  write_file(dir / "nan.csv", "id,label,a\nx,PD,abc\n");
  CHECK(code_of([&] { read_features_csv(dir / "nan.csv"); }) == ErrorCode::kMalformedInput);
  write_file(dir / "dup.csv", "id,label,a,a\nx,PD,1,2\n");
  CHECK(code_of([&] { read_features_csv(dir / "dup.csv"); }) == ErrorCode::kMalformedInput);
  write_file(dir / "hdr.csv", "label,id,a\nPD,x,1\n");
  CHECK(code_of([&] { read_features_csv(dir / "hdr.csv"); }) == ErrorCode::kMalformedInput);
  write_file(dir / "ids.csv", "id,label,a\nx,PD,1\nx,HC,2\n");
  CHECK(code_of([&] { read_features_csv(dir / "ids.csv"); }) == ErrorCode::kMalformedInput);
  CHECK(code_of([&] { read_features_csv(dir / "none.csv"); }) == ErrorCode::kMissingFile);
}

TEST_CASE("format_double is exact", "[io][property]") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    double v;
    const std::uint64_t bits = rng();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    REQUIRE(parse_double(format_double(v)) == v);
  }
  CHECK_THROWS_AS(parse_double("1.5x"), Error);
  CHECK_THROWS_AS(parse_double(""), Error);
}

TEST_CASE("speech dimension tags", "[report]") {
  CHECK(dimension_tag("F1_IPR") == 'A');
  CHECK(dimension_tag("B3_mean") == 'A');
  CHECK(dimension_tag("TEO_R") == 'P');
  CHECK(dimension_tag("F0_std") == 'P');
  CHECK(dimension_tag("PPE") == 'P');
  CHECK(dimension_tag("TPT") == 'S');
  CHECK(dimension_tag("TPT50") == 'S');
  CHECK(dimension_tag("SPIR") == 'S');
  CHECK(dimension_tag("ZCR_IQR") == 'Q');
  CHECK(dimension_tag("MPSD_median") == 'Q');
  CHECK(dimension_tag("MPDS_median") == 'Q');
  CHECK(dimension_tag("HNR_p95") == 'Q');
  CHECK_FALSE(try_dimension_tag("n0").has_value());
  CHECK_THROWS_AS(dimension_tag("X9_R"), Error);
  for (const auto& name : canonical_feature_names()) CHECK(try_dimension_tag(name).has_value());

  CHECK(display_name("F1_IPR") == "F1 (IPR)");
  CHECK(display_name("ZCR_p5") == "ZCR (5th p)");
  CHECK(display_name("STE_q1") == "STE (1st q)");
  CHECK(display_name("TPT") == "TPT");
}

TEST_CASE("results table", "[report]") {
  CorrelationResult c;
  c.feature = "TPT";
  c.r_p = -0.5;
  c.p_p = 0.001;
  c.r_s = -0.45;
  c.p_s = 0.002;
  const std::vector<UnivariateRow> uni{{"TPT", c, {0.9, 0.95, 0.96, 0.94}}, {"F1_IPR", std::nullopt, {0.3, 0.6, 0.7, 0.5}}};
  const std::vector<MultivariateRow> multi{{{"TPT", "F1_IPR", "TPT50"}, {0.95, 0.97, 0.98, 0.96}}};
  const std::string table = render_table(uni, multi);
  CHECK(table.find("| speech dim. | speech feature | r_p | p_p | r_s | p_s | MCC | ACC [%] | SEN [%] | SPE [%] |") !=
        std::string::npos);
  CHECK(table.find("| speech dim. | speech features | MCC | ACC [%] | SEN [%] | SPE [%] |") != std::string::npos);
  CHECK(table.find("| S | TPT | -0.5000 | 0.0010 | -0.4500 | 0.0020 | 0.9000 | 95.00 | 96.00 | 94.00 |") !=
        std::string::npos);
  CHECK(table.find("| A | F1 (IPR) | n/a | n/a | n/a | n/a | 0.3000 |") != std::string::npos);
  CHECK(table.find("| S, A | TPT, F1 (IPR), TPT50 | 0.9500 |") != std::string::npos);
  CHECK(render_table({}, {}).empty());
}

TEST_CASE("best per dimension", "[report]") {
  const std::vector<UnivariateResult> uni{{"F1_IPR", fake_report({"F1_IPR"}, 0.3)},
                                          {"F2_R", fake_report({"F2_R"}, 0.5)},
                                          {"TPT", fake_report({"TPT"}, 0.9)},
                                          {"n0", fake_report({"n0"}, 0.99)}};
  const auto rows = best_per_dimension(uni, {});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].feature == "F2_R");
  CHECK(rows[1].feature == "TPT");
  CHECK_FALSE(rows[0].correlation.has_value());
}

TEST_CASE("JSON documents", "[report]") {
  SECTION("correlation") {
    FeatureMatrix m = noise_matrix(10, 10, 3, 4);
    for (auto& r : m.rows) r.values[2] = 1.0;
    m.feature_names = {"TPT", "F0_R", "ZCR_IQR"};
    const auto results = correlate_features(m);
    const nlohmann::json doc = nlohmann::json::parse(correlation_document(results, 20).dump());
    CHECK(doc.at("schema_version") == kReportSchemaVersion);
    CHECK(doc.at("kind") == "correlation");
    CHECK(doc.at("alpha").get<double>() == kSignificanceAlpha);
    CHECK(doc.at("n_rows") == 20);
    REQUIRE(doc.at("results").size() == 3);
    const auto& last = doc.at("results").back();
    CHECK(last.at("feature") == "ZCR_IQR");
    CHECK(last.at("dimension") == "Q");
    CHECK(last.at("r_p").is_null());
    CHECK(last.at("zero_variance") == true);
    const auto back = correlations_from_json(doc);
    REQUIRE(back.size() == results.size());
    CHECK(back[0].feature == results[0].feature);
    CHECK(back[0].r_s == results[0].r_s);
    CHECK(back[0].p_p == results[0].p_p);
    CHECK(std::isnan(back[2].r_p));
  }
  SECTION("univariate") {
    std::vector<UnivariateResult> uni{{"TPT", fake_report({"TPT"}, 0.9)}, {"F1_IPR", fake_report({"F1_IPR"}, 0.95)}};
    rank_univariate(uni);
    CHECK(uni[0].feature == "F1_IPR");
    Protocol p;
    const nlohmann::json doc = nlohmann::json::parse(univariate_document(uni, p, {}).dump());
    CHECK(doc.at("kind") == "univariate");
    CHECK(doc.at("protocol").at("k") == 10);
    CHECK(doc.at("protocol").at("repetitions") == 20);
    CHECK(doc.at("protocol").at("trees") == 300);
    CHECK(doc.at("results")[0].at("dimension") == "A");
    CHECK(doc.at("table").get<std::string>().find("F1 (IPR)") != std::string::npos);
    const auto back = univariate_from_json(doc);
    REQUIRE(back.size() == 2);
    CHECK(back[1].feature == "TPT");
    CHECK(back[1].report.mean.mcc == 0.9);
    CHECK(back[1].report.confusions == uni[1].report.confusions);
    CHECK(back[1].report.fold_averaged.acc == uni[1].report.fold_averaged.acc);
  }
  SECTION("sffs") {
    SffsResult res;
    res.selected = {"TPT", "HNR_mean"};
    res.best_j = 0.93;
    res.evaluations = 12;
    res.trace = {{SffsAction::kAdd, "TPT", {"TPT"}, 0.9, 0.9}, {SffsAction::kAdd, "HNR_mean", {"TPT", "HNR_mean"}, 0.93, 0.93}};
    res.report = fake_report(res.selected, 0.93);
    const nlohmann::json doc = nlohmann::json::parse(sffs_document(res, Protocol{}, SffsOptions{}, 217).dump());
    CHECK(doc.at("kind") == "sffs");
    CHECK(doc.at("protocol").at("features_per_split") == 14);
    CHECK(doc.at("max_subset") == 10);
    CHECK(doc.at("patience") == 3);
    CHECK(doc.at("trace").size() == 2);
    CHECK(doc.at("trace")[1].at("action") == "add");
    const MultivariateRow row = multivariate_from_json(doc);
    CHECK(row.features == res.selected);
    CHECK(row.metrics.mcc == 0.93);
    CHECK(doc.at("table").get<std::string>().find("| S, Q | TPT, HNR (mean) |") != std::string::npos);
  }
}
