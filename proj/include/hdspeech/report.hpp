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
 * @file report.hpp
 * @brief JSON documents for correlation and classification results, speech
 * dimension tags, and the results table.
 *
 * Every document carries "schema_version" and "kind". Non-finite numbers are
 * written as null.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdspeech/error.hpp"
#include "hdspeech/features.hpp"
#include "hdspeech/functionals.hpp"
#include "hdspeech/metrics.hpp"
#include "hdspeech/sffs.hpp"
#include "hdspeech/statcorr.hpp"
#include "hdspeech/validation.hpp"

namespace hdspeech {

inline constexpr int kReportSchemaVersion = 1;

/// Feature base: the part before the first '_' ("F1_IPR" -> "F1").
inline std::string_view feature_base(std::string_view feature) {
  const auto us = feature.find('_');
  return us == std::string_view::npos ? feature : feature.substr(0, us);
}

/// Speech dimension of a feature: A (articulation), P (prosody), S (fluency)
/// or Q (voice quality); nullopt for names outside the canonical families.
inline std::optional<char> try_dimension_tag(std::string_view feature) {
  const std::string_view base = feature_base(feature);
  static const std::map<std::string_view, char, std::less<>> kTags = {
      {"F1", 'A'},  {"F2", 'A'},   {"F3", 'A'},  {"B1", 'A'},  {"B2", 'A'},  {"B3", 'A'},
      {"F0", 'P'},  {"PPE", 'P'},  {"STE", 'P'}, {"TEO", 'P'}, {"NVB", 'S'}, {"DVB", 'S'},
      {"TPT", 'S'}, {"TPT50", 'S'}, {"AR", 'S'}, {"SPIR", 'S'}, {"HNR", 'Q'}, {"MPSD", 'Q'},
      {"MPDS", 'Q'}, {"SF", 'Q'},  {"ZCR", 'Q'}, {"VTI", 'Q'}};
  const auto it = kTags.find(base);
  if (it == kTags.end()) return std::nullopt;
  return it->second;
}

inline char dimension_tag(std::string_view feature) {
  const auto tag = try_dimension_tag(feature);
  if (!tag) throw Error(ErrorCode::kSchemaMismatch, "no speech dimension for '" + std::string(feature) + "'");
  return *tag;
}

namespace detail {
inline nlohmann::json dimension_json(std::string_view feature) {
  const auto tag = try_dimension_tag(feature);
  return tag ? nlohmann::json(std::string(1, *tag)) : nlohmann::json(nullptr);
}
inline std::string dimension_cell(std::string_view feature) {
  const auto tag = try_dimension_tag(feature);
  return tag ? std::string(1, *tag) : std::string("-");
}
}  // namespace detail

/// Table label of a feature: "F1_IPR" -> "F1 (IPR)", "ZCR_p5" -> "ZCR (5th p)".
inline std::string display_name(std::string_view feature) {
  const auto us = feature.find('_');
  if (us == std::string_view::npos) return std::string(feature);
  std::string func(feature.substr(us + 1));
  static const std::map<std::string, std::string, std::less<>> kPretty = {
      {"p5", "5th p"}, {"q1", "1st q"}, {"q3", "3rd q"}, {"p95", "95th p"}};
  if (const auto it = kPretty.find(func); it != kPretty.end()) func = it->second;
  return std::string(feature.substr(0, us)) + " (" + func + ")";
}

namespace detail {

inline nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline double number_from(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline std::string fixed(double v, int digits) {
  if (!std::isfinite(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace detail

inline nlohmann::json to_json(const Metrics& m) {
  return {{"mcc", detail::number(m.mcc)}, {"acc", detail::number(m.acc)}, {"sen", detail::number(m.sen)},
          {"spe", detail::number(m.spe)}};
}

inline Metrics metrics_from_json(const nlohmann::json& j) {
  return {detail::number_from(j.at("mcc")), detail::number_from(j.at("acc")), detail::number_from(j.at("sen")),
          detail::number_from(j.at("spe"))};
}

inline nlohmann::json to_json(const Confusion& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

inline nlohmann::json to_json(const ClassificationReport& r) {
  nlohmann::json confusions = nlohmann::json::array();
  for (const auto& c : r.confusions) confusions.push_back(to_json(c));
  nlohmann::json per_rep = nlohmann::json::array();
  for (const auto& m : r.per_repetition) per_rep.push_back(to_json(m));
  return {{"feature_names", r.feature_names},
          {"k", r.k},
          {"repetitions", r.repetitions},
          {"master_seed", r.master_seed},
          {"confusions", std::move(confusions)},
          {"per_repetition", std::move(per_rep)},
          {"mean", to_json(r.mean)},
          {"std", to_json(r.std)},
          {"fold_averaged", to_json(r.fold_averaged)}};
}

inline ClassificationReport report_from_json(const nlohmann::json& j) {
  ClassificationReport r;
  r.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  r.k = j.at("k").get<int>();
  r.repetitions = j.at("repetitions").get<int>();
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  for (const auto& c : j.at("confusions")) {
    r.confusions.push_back({c.at("tp").get<std::int64_t>(), c.at("fp").get<std::int64_t>(),
                            c.at("tn").get<std::int64_t>(), c.at("fn").get<std::int64_t>()});
  }
  for (const auto& m : j.at("per_repetition")) r.per_repetition.push_back(metrics_from_json(m));
  r.mean = metrics_from_json(j.at("mean"));
  r.std = metrics_from_json(j.at("std"));
  r.fold_averaged = metrics_from_json(j.at("fold_averaged"));
  return r;
}

inline nlohmann::json to_json(const Protocol& p, std::size_t feature_count) {
  return {{"k", p.k},
          {"repetitions", p.repetitions},
          {"trees", p.forest.n_trees},
          {"min_leaf", p.forest.min_leaf},
          {"features_per_split", p.forest.resolved_features_per_split(std::max<std::size_t>(feature_count, 1))},
          {"master_seed", p.master_seed}};
}

inline nlohmann::json to_json(const CorrelationResult& c) {
  return {{"feature", c.feature},
          {"dimension", detail::dimension_json(c.feature)},
          {"r_p", detail::number(c.r_p)},
          {"p_p", detail::number(c.p_p)},
          {"r_s", detail::number(c.r_s)},
          {"p_s", detail::number(c.p_s)},
          {"n", c.n},
          {"significant_at_alpha", c.significant_at_alpha},
          {"zero_variance", c.zero_variance}};
}

inline nlohmann::json correlation_document(const std::vector<CorrelationResult>& results, std::size_t rows) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : results) list.push_back(to_json(r));
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "correlation"},
          {"alpha", kSignificanceAlpha},
          {"n_rows", rows},
          {"results", std::move(list)}};
}

inline std::vector<CorrelationResult> correlations_from_json(const nlohmann::json& doc) {
  std::vector<CorrelationResult> out;
  for (const auto& j : doc.at("results")) {
    CorrelationResult c;
    c.feature = j.at("feature").get<std::string>();
    c.r_p = detail::number_from(j.at("r_p"));
    c.p_p = detail::number_from(j.at("p_p"));
    c.r_s = detail::number_from(j.at("r_s"));
    c.p_s = detail::number_from(j.at("p_s"));
    c.n = j.at("n").get<std::size_t>();
    c.significant_at_alpha = j.at("significant_at_alpha").get<bool>();
    c.zero_variance = j.at("zero_variance").get<bool>();
    out.push_back(std::move(c));
  }
  return out;
}

struct UnivariateResult {
  std::string feature;
  ClassificationReport report;
};

/// Ranked by mean MCC, descending; ties keep feature order.
inline void rank_univariate(std::vector<UnivariateResult>& results) {
  std::stable_sort(results.begin(), results.end(),
                   [](const auto& a, const auto& b) { return a.report.mean.mcc > b.report.mean.mcc; });
}

struct UnivariateRow {
  std::string feature;
  std::optional<CorrelationResult> correlation;
  Metrics metrics;
};

struct MultivariateRow {
  std::vector<std::string> features;
  Metrics metrics;
};

/// Markdown rendering with the results-table columns. Correlation cells are
/// "n/a" when unavailable.
inline std::string render_table(const std::vector<UnivariateRow>& uni, const std::vector<MultivariateRow>& multi) {
  using detail::fixed;
  std::string out;
  if (!uni.empty()) {
    out += "Univariate analysis\n\n";
    out += "| speech dim. | speech feature | r_p | p_p | r_s | p_s | MCC | ACC [%] | SEN [%] | SPE [%] |\n";
    out += "|---|---|---|---|---|---|---|---|---|---|\n";
  }
  for (const auto& r : uni) {
    const auto& c = r.correlation;
    out += "| " + detail::dimension_cell(r.feature) + " | " + display_name(r.feature) + " | " +
           (c ? fixed(c->r_p, 4) : "n/a") + " | " + (c ? fixed(c->p_p, 4) : "n/a") + " | " +
           (c ? fixed(c->r_s, 4) : "n/a") + " | " + (c ? fixed(c->p_s, 4) : "n/a") + " | " + fixed(r.metrics.mcc, 4) +
           " | " + fixed(100.0 * r.metrics.acc, 2) + " | " + fixed(100.0 * r.metrics.sen, 2) + " | " +
           fixed(100.0 * r.metrics.spe, 2) + " |\n";
  }
  if (!multi.empty()) {
    if (!out.empty()) out += "\n";
    out += "Multivariate analysis\n\n";
    out += "| speech dim. | speech features | MCC | ACC [%] | SEN [%] | SPE [%] |\n";
    out += "|---|---|---|---|---|---|\n";
    for (const auto& r : multi) {
      std::string dims, names;
      std::string seen;
      for (const auto& f : r.features) {
        const auto tag = try_dimension_tag(f);
        const char d = tag ? *tag : '-';
        if (seen.find(d) == std::string::npos) {
          if (!seen.empty()) dims += ", ";
          dims += d;
          seen += d;
        }
        if (!names.empty()) names += ", ";
        names += display_name(f);
      }
      out += "| " + dims + " | " + names + " | " + fixed(r.metrics.mcc, 4) + " | " + fixed(100.0 * r.metrics.acc, 2) +
             " | " + fixed(100.0 * r.metrics.sen, 2) + " | " + fixed(100.0 * r.metrics.spe, 2) + " |\n";
    }
  }
  return out;
}

inline std::optional<CorrelationResult> find_correlation(const std::vector<CorrelationResult>& corr,
                                                         std::string_view feature) {
  for (const auto& c : corr) {
    if (c.feature == feature) return c;
  }
  return std::nullopt;
}

/// Best univariate feature (highest mean MCC) of each dimension, in A, P, S,
/// Q order; dimensions without results are skipped.
inline std::vector<UnivariateRow> best_per_dimension(const std::vector<UnivariateResult>& uni,
                                                     const std::vector<CorrelationResult>& corr) {
  std::vector<UnivariateRow> rows;
  for (char dim : {'A', 'P', 'S', 'Q'}) {
    const UnivariateResult* best = nullptr;
    for (const auto& u : uni) {
      if (try_dimension_tag(u.feature) != dim) continue;
      if (best == nullptr || u.report.mean.mcc > best->report.mean.mcc) best = &u;
    }
    if (best != nullptr) rows.push_back({best->feature, find_correlation(corr, best->feature), best->report.mean});
  }
  return rows;
}

inline nlohmann::json univariate_document(const std::vector<UnivariateResult>& results, const Protocol& protocol,
                                          const std::vector<CorrelationResult>& corr) {
  nlohmann::json list = nlohmann::json::array();
  std::vector<UnivariateRow> rows;
  for (const auto& r : results) {
    list.push_back({{"feature", r.feature},
                    {"dimension", detail::dimension_json(r.feature)},
                    {"report", to_json(r.report)}});
    rows.push_back({r.feature, find_correlation(corr, r.feature), r.report.mean});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "univariate"},
          {"protocol", to_json(protocol, 1)},
          {"results", std::move(list)},
          {"table", render_table(rows, {})}};
}

inline std::vector<UnivariateResult> univariate_from_json(const nlohmann::json& doc) {
  std::vector<UnivariateResult> out;
  for (const auto& j : doc.at("results")) {
    out.push_back({j.at("feature").get<std::string>(), report_from_json(j.at("report"))});
  }
  return out;
}

inline nlohmann::json sffs_document(const SffsResult& result, const Protocol& protocol, const SffsOptions& options,
                                    std::size_t feature_count) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& s : result.trace) {
    trace.push_back({{"action", to_string(s.action)},
                     {"feature", s.feature},
                     {"subset", s.subset},
                     {"j", detail::number(s.j)},
                     {"best_so_far", detail::number(s.best_so_far)}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"kind", "sffs"},
          {"protocol", to_json(protocol, feature_count)},
          {"criterion", "mean MCC"},
          {"max_subset", options.max_subset},
          {"patience", options.patience},
          {"selected", result.selected},
          {"best_j", detail::number(result.best_j)},
          {"evaluations", result.evaluations},
          {"trace", std::move(trace)},
          {"report", to_json(result.report)},
          {"table", render_table({}, {{result.selected, result.report.mean}})}};
}

inline MultivariateRow multivariate_from_json(const nlohmann::json& doc) {
  return {doc.at("selected").get<std::vector<std::string>>(), report_from_json(doc.at("report")).mean};
}

}  // namespace hdspeech
