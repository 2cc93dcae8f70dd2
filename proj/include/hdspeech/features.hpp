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
 * @file features.hpp
 * @brief Per-recording feature rows and the full extraction pipeline.
 *
 * A row holds 217 values: 14 contour bases x 15 functionals named
 * "<BASE>_<FUNC>" (e.g. "F1_IPR"), followed by the scalars PPE, NVB, DVB,
 * TPT, TPT50, AR and SPIR. Missing values are NaN.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hdspeech/audio_io.hpp"
#include "hdspeech/contour.hpp"
#include "hdspeech/error.hpp"
#include "hdspeech/formants.hpp"
#include "hdspeech/frame_features.hpp"
#include "hdspeech/functionals.hpp"
#include "hdspeech/pitch.hpp"
#include "hdspeech/segmental.hpp"

namespace hdspeech {

enum class Label { kHC = 0, kPD = 1 };

inline std::string to_string(Label l) { return l == Label::kPD ? "PD" : "HC"; }

inline Label parse_label(std::string_view s) {
  if (s == "PD") return Label::kPD;
  if (s == "HC") return Label::kHC;
  throw Error(ErrorCode::kMalformedInput, "label must be PD or HC, got '" + std::string(s) + "'");
}

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

inline constexpr std::array<std::string_view, 7> kScalarNames = {"PPE", "NVB", "DVB", "TPT",
                                                                 "TPT50", "AR", "SPIR"};
inline constexpr std::size_t kFeatureCount = kContourBases.size() * kFunctionalNames.size() + kScalarNames.size();

/// The 217 feature names in canonical column order.
inline const std::vector<std::string>& canonical_feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    out.reserve(kFeatureCount);
    for (auto base : kContourBases) {
      for (auto func : kFunctionalNames) out.push_back(std::string(base) + "_" + std::string(func));
    }
    for (auto s : kScalarNames) out.emplace_back(s);
    return out;
  }();
  return names;
}

struct FeatureRow {
  std::string recording_id;
  Label label = Label::kHC;
  std::vector<double> values;  // aligned with the owning matrix's names
};

struct FeatureMatrix {
  std::vector<std::string> feature_names;
  std::vector<FeatureRow> rows;

  std::size_t feature_count() const noexcept { return feature_names.size(); }
  std::size_t row_count() const noexcept { return rows.size(); }

  std::size_t column_index(std::string_view name) const {
    const auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) {
      throw Error(ErrorCode::kSchemaMismatch, "unknown feature '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - feature_names.begin());
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i].values[j];
    return out;
  }

  std::size_t count(Label l) const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const FeatureRow& r) { return r.label == l; }));
  }

  void validate() const {
    for (const auto& r : rows) {
      if (r.values.size() != feature_names.size()) {
        throw Error(ErrorCode::kSchemaMismatch, "row '" + r.recording_id + "' is not rectangular");
      }
    }
  }
};

/// Copy of `m` restricted to the named columns, in the given order.
inline FeatureMatrix select_columns(const FeatureMatrix& m, const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(m.column_index(n));
  FeatureMatrix out;
  out.feature_names = names;
  out.rows.reserve(m.rows.size());
  for (const auto& r : m.rows) {
    FeatureRow nr{r.recording_id, r.label, {}};
    nr.values.reserve(idx.size());
    for (auto j : idx) nr.values.push_back(r.values[j]);
    out.rows.push_back(std::move(nr));
  }
  return out;
}

/// Named scalar value or nullopt when its extractor failed.
using ScalarMap = std::map<std::string, std::optional<double>, std::less<>>;

/// Value lookup by canonical name.
inline double feature_value(const FeatureRow& row, std::string_view name) {
  const auto& names = canonical_feature_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end() || row.values.size() != names.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "unknown feature '" + std::string(name) + "'");
  }
  return row.values[static_cast<std::size_t>(it - names.begin())];
}

/// Assembles the canonical 217-value row. `contours` must hold each of the
/// 14 bases exactly once (any order); `scalars` must hold all seven scalars.
inline FeatureRow build_feature_row(std::string id, Label label, const std::vector<Contour>& contours,
                                    const ScalarMap& scalars) {
  if (contours.size() != kContourBases.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected 14 contours, got " + std::to_string(contours.size()));
  }
  std::map<std::string, const Contour*, std::less<>> by_base;
  for (const auto& c : contours) {
    if (std::find(kContourBases.begin(), kContourBases.end(), c.base_name) == kContourBases.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown contour base '" + c.base_name + "'");
    }
    if (!by_base.emplace(c.base_name, &c).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate contour '" + c.base_name + "'");
    }
  }
  FeatureRow row{std::move(id), label, {}};
  row.values.reserve(kFeatureCount);
  for (auto base : kContourBases) {
    const FunctionalSet fs = apply_functionals(*by_base.find(base)->second);
    for (std::size_t k = 0; k < kFunctionalNames.size(); ++k) {
      row.values.push_back(fs.valid && fs.values[k] ? *fs.values[k] : kMissing);
    }
  }
  for (auto name : kScalarNames) {
    const auto it = scalars.find(name);
    if (it == scalars.end()) {
      throw Error(ErrorCode::kInvalidArgument, "missing scalar '" + std::string(name) + "'");
    }
    row.values.push_back(it->second ? *it->second : kMissing);
  }
  return row;
}

/// Everything extracted from one recording before labels enter the picture.
struct RecordingAnalysis {
  std::vector<Contour> contours;  // canonical base order
  ScalarMap scalars;
  SegmentList segments;
  VoicingMask voicing;
  double duration_s = 0.0;
};

namespace detail {
template <typename F>
std::optional<double> guarded(F&& f) {
  try {
    const double v = f();
    return std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
}
}  // namespace detail

/// Full extraction: resample to 16 kHz, trim edge silence, then compute all
/// contours and scalars. Throws on unusable input (e.g. silence); scalars
/// whose extractor fails individually are recorded as missing.
inline RecordingAnalysis analyze_recording(const AudioSignal& raw, const FrameGrid& grid = {}) {
  const AudioSignal at_rate = resample(raw, kAnalysisRateHz);
  const FrameGrid rect = grid.with_window(WindowKind::kRectangular);
  const FrameGrid hann = grid.with_window(WindowKind::kHann);
  const AudioSignal signal = trim_edge_silence(at_rate, rect);

  const FrameSeries rect_frames = frame_signal(signal, rect);
  const FrameSeries hann_frames = frame_signal(signal, hann);

  PitchTrack pitch = estimate_f0(rect_frames);
  FormantTrack formants = estimate_formants(signal, rect, pitch.voicing);

  RecordingAnalysis out;
  out.duration_s = signal.duration_s();
  out.voicing = pitch.voicing;
  out.contours.reserve(kContourBases.size());
  out.contours.push_back(pitch.f0);
  for (auto& c : formants.frequency) out.contours.push_back(std::move(c));
  for (auto& c : formants.bandwidth) out.contours.push_back(std::move(c));
  out.contours.push_back(short_time_energy(rect_frames));
  out.contours.push_back(teager_energy(signal, rect));
  out.contours.push_back(zero_crossing_rate(rect_frames));
  out.contours.push_back(spectral_flux(hann_frames));
  out.contours.push_back(median_psd(hann_frames));
  out.contours.push_back(hnr(rect_frames, pitch.f0, pitch.voicing));
  out.contours.push_back(vti(hann_frames, pitch.voicing));

  out.segments = detect_pauses(signal, rect, pitch.voicing);
  const auto breaks = [&]() -> std::optional<VoiceBreaks> {
    try {
      return voice_breaks(pitch.voicing, out.segments, rect);
    } catch (const Error&) {
      return std::nullopt;
    }
  }();
  out.scalars["PPE"] = detail::guarded([&] { return pitch_period_entropy(pitch.f0, pitch.voicing); });
  out.scalars["NVB"] = breaks ? std::optional<double>(breaks->count) : std::nullopt;
  out.scalars["DVB"] = breaks ? std::optional<double>(breaks->degree_percent) : std::nullopt;
  out.scalars["TPT"] = total_pause_time(out.segments, 0.0);
  out.scalars["TPT50"] = total_pause_time(out.segments, kFluencyPauseS * 1000.0);
  out.scalars["AR"] = detail::guarded([&] { return articulation_rate(signal, rect, pitch.voicing, out.segments); });
  out.scalars["SPIR"] = detail::guarded([&] { return spir(out.segments); });
  return out;
}

/// Label-blind extraction followed by row assembly; the label is only
/// copied through.
inline FeatureRow extract_feature_row(const std::string& id, Label label, const AudioSignal& raw,
                                      const FrameGrid& grid = {}) {
  const RecordingAnalysis a = analyze_recording(raw, grid);
  return build_feature_row(id, label, a.contours, a.scalars);
}

}  // namespace hdspeech
