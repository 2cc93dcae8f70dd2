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
 * @file cli.hpp
 * @brief The pipeline commands behind the hdspeech tool. Each returns the
 * process exit code: 0 success, 2 data or runtime error (usage errors, code
 * 1, are the argument parser's business).
 */
#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hdspeech/audio_io.hpp"
#include "hdspeech/corpus.hpp"
#include "hdspeech/error.hpp"
#include "hdspeech/features.hpp"
#include "hdspeech/io.hpp"
#include "hdspeech/parallel.hpp"
#include "hdspeech/report.hpp"
#include "hdspeech/sffs.hpp"
#include "hdspeech/statcorr.hpp"
#include "hdspeech/validation.hpp"

namespace hdspeech::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

struct SynthOptions {
  std::filesystem::path out;
  std::uint64_t seed = 1;
  int n_per_class = 50;
};

struct ExtractOptions {
  std::filesystem::path manifest;
  std::filesystem::path out;
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  unsigned threads = 0;
};

struct CorrelateOptions {
  std::filesystem::path features;
  std::filesystem::path out;
};

struct ClassifyOptions {
  std::filesystem::path features;
  std::filesystem::path out;
  std::string mode = "uni";
  int folds = 10;
  int repetitions = 20;
  int trees = 300;
  std::uint64_t seed = 1;
  std::size_t max_subset = 10;
  std::size_t patience = 3;
  unsigned threads = 0;
};

struct ReportOptions {
  std::filesystem::path uni;
  std::filesystem::path multi;  // optional
  std::filesystem::path corr;
  std::filesystem::path out;
};

namespace detail {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitData;
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedInput, path.string() + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  hdspeech::detail::write_text(path, doc.dump(2) + "\n");
}

inline Protocol protocol_of(const ClassifyOptions& o) {
  if (o.folds < 2) throw Error(ErrorCode::kInvalidArgument, "--folds must be at least 2");
  if (o.repetitions < 1) throw Error(ErrorCode::kInvalidArgument, "--repetitions must be at least 1");
  if (o.trees < 1) throw Error(ErrorCode::kInvalidArgument, "--trees must be at least 1");
  if (o.max_subset < 1) throw Error(ErrorCode::kInvalidArgument, "--max-subset must be at least 1");
  if (o.patience < 1) throw Error(ErrorCode::kInvalidArgument, "--patience must be at least 1");
  Protocol p;
  p.k = o.folds;
  p.repetitions = o.repetitions;
  p.forest.n_trees = o.trees;
  p.master_seed = o.seed;
  p.threads = o.threads;
  return p;
}

}  // namespace detail

inline int cmd_synth(const SynthOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (o.n_per_class < 1) throw Error(ErrorCode::kInvalidArgument, "--n-per-class must be at least 1");
    CorpusSpec spec;
    spec.n_pd = spec.n_hc = o.n_per_class;
    spec.master_seed = o.seed;
    const CorpusSummary s = generate_corpus(spec, o.out);
    out << "synthesized " << s.n_pd + s.n_hc << " recordings (" << s.n_pd << " PD, " << s.n_hc << " HC) into "
        << o.out.string() << "\n";
    return kExitOk;
  });
}

inline int cmd_extract(const ExtractOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    FrameGrid grid;
    grid.frame_len_ms = o.frame_ms;
    grid.hop_ms = o.hop_ms;
    grid.validate(kAnalysisRateHz);
    const Manifest manifest = read_manifest(o.manifest);

    std::vector<std::optional<FeatureRow>> rows(manifest.rows.size());
    std::vector<std::string> failures(manifest.rows.size());
    parallel_for(
        manifest.rows.size(),
        [&](std::size_t i) {
          const ManifestRow& r = manifest.rows[i];
          try {
            rows[i] = extract_feature_row(r.id, r.label, read_wav(manifest.resolve_path(r)), grid);
          } catch (const std::exception& e) {
            failures[i] = e.what();
          }
        },
        o.threads);

    FeatureMatrix m;
    m.feature_names = canonical_feature_names();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i]) {
        m.rows.push_back(std::move(*rows[i]));
      } else {
        err << "warning: skipping " << manifest.rows[i].id << ": " << failures[i] << "\n";
      }
    }
    if (m.rows.empty()) throw Error(ErrorCode::kNoSpeechContent, "no recording could be processed");
    write_features_csv(o.out, m);
    out << "extracted " << m.rows.size() << " of " << manifest.rows.size() << " recordings into " << o.out.string()
        << "\n";
    return kExitOk;
  });
}

inline int cmd_correlate(const CorrelateOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const FeatureMatrix m = read_features_csv(o.features);
    const auto results = correlate_features(m);
    detail::write_json(o.out, correlation_document(results, m.row_count()));
    const auto significant = std::count_if(results.begin(), results.end(),
                                           [](const auto& r) { return r.significant_at_alpha; });
    out << "correlated " << results.size() << " features over " << m.row_count() << " recordings; " << significant
        << " significant at alpha = " << kSignificanceAlpha << "\n";
    return kExitOk;
  });
}

inline int cmd_classify(const ClassifyOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const Protocol protocol = detail::protocol_of(o);
    const FeatureMatrix m = read_features_csv(o.features);
    if (m.count(Label::kPD) == 0 || m.count(Label::kHC) == 0) {
      throw Error(ErrorCode::kSingleClass, "both PD and HC rows are required");
    }
    if (o.mode == "uni") {
      const DenseData raw = hdspeech::detail::raw_dense(m);
      std::vector<UnivariateResult> results;
      for (std::size_t j = 0; j < m.feature_count(); ++j) {
        const std::size_t col[] = {j};
        results.push_back({m.feature_names[j],
                           hdspeech::detail::cross_validate_dense(hdspeech::detail::dense_columns(raw, col),
                                                                  {m.feature_names[j]}, protocol)});
      }
      rank_univariate(results);
      const auto doc = univariate_document(results, protocol, correlate_features(m));
      detail::write_json(o.out, doc);
      out << doc.at("table").get<std::string>();
      return kExitOk;
    }
    if (o.mode == "sffs") {
      SffsOptions options;
      options.max_subset = o.max_subset;
      options.patience = o.patience;
      const SffsResult result = sffs(m, protocol, options);
      const auto doc = sffs_document(result, protocol, options, m.feature_count());
      detail::write_json(o.out, doc);
      out << doc.at("table").get<std::string>();
      return kExitOk;
    }
    throw Error(ErrorCode::kInvalidArgument, "--mode must be uni or sffs");
  });
}

inline int cmd_report(const ReportOptions& o, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto uni = univariate_from_json(detail::read_json(o.uni));
    const auto corr = correlations_from_json(detail::read_json(o.corr));
    std::vector<MultivariateRow> multi;
    if (!o.multi.empty()) multi.push_back(multivariate_from_json(detail::read_json(o.multi)));
    const std::string table = render_table(best_per_dimension(uni, corr), multi);
    hdspeech::detail::write_text(o.out, table);
    out << table;
    return kExitOk;
  });
}

}  // namespace hdspeech::cli
