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
 * @file segmental.hpp
 * @brief Speech/pause segmentation and the fluency scalars NVB, DVB, TPT,
 * TPT50, AR and SPIR.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hdspeech/audio_io.hpp"
#include "hdspeech/contour.hpp"
#include "hdspeech/error.hpp"

namespace hdspeech {

enum class SegmentKind { kSpeech, kPause };

struct Segment {
  double start_s = 0.0;
  double end_s = 0.0;
  SegmentKind kind = SegmentKind::kSpeech;

  double duration_s() const noexcept { return end_s - start_s; }
};

/// Ordered speech/pause partition tiling [0, total_duration_s].
struct SegmentList {
  std::vector<Segment> segments;
  double total_duration_s = 0.0;

  std::size_t pause_count(double min_pause_s = 0.0) const {
    std::size_t n = 0;
    for (const auto& s : segments) n += s.kind == SegmentKind::kPause && s.duration_s() > min_pause_s;
    return n;
  }
};

struct FluencyScalars {
  double nvb = 0.0;
  double dvb_percent = 0.0;
  double tpt_s = 0.0;
  double tpt50_s = 0.0;
  double ar_syll_per_s = 0.0;
  double spir_pauses_per_min = 0.0;
};

inline constexpr double kSilenceMarginDb = 30.0;
inline constexpr double kMinPauseS = 0.020;
inline constexpr double kVoiceBreakMinS = 0.090;
inline constexpr double kFluencyPauseS = 0.050;

/// Builds a tiling SegmentList from sorted, disjoint pause intervals.
inline SegmentList segments_from_pauses(const std::vector<std::pair<double, double>>& pauses,
                                        double total_duration_s) {
  SegmentList out;
  out.total_duration_s = total_duration_s;
  double cursor = 0.0;
  for (const auto& [s, e] : pauses) {
    if (s > cursor) out.segments.push_back({cursor, s, SegmentKind::kSpeech});
    out.segments.push_back({s, e, SegmentKind::kPause});
    cursor = e;
  }
  if (cursor < total_duration_s) out.segments.push_back({cursor, total_duration_s, SegmentKind::kSpeech});
  return out;
}

/// Frames more than 30 dB below the loudest frame and unvoiced are silent;
/// silent runs of at least 20 ms become pauses.
///
/// A silent frame lies wholly inside a gap, so a run of frames i..j places
/// the gap's edges somewhere within the neighbouring hops; each edge is put
/// at the midpoint of that uncertainty (half a hop before frame i starts,
/// half a hop after frame j ends). Loud stretches shorter than a frame fall
/// back to hop-centred boundaries so every speech segment keeps positive
/// length.
inline SegmentList detect_pauses(const AudioSignal& signal, const FrameGrid& grid,
                                 const VoicingMask& voicing) {
  const int rate = signal.sample_rate_hz();
  grid.validate(rate);
  const std::size_t len = grid.frame_len_samples(rate);
  const std::size_t hop = grid.hop_samples(rate);
  const double total = signal.duration_s();
  const auto db = frame_rms_db(signal.samples(), len, hop);
  if (db.size() != voicing.size()) {
    throw Error(ErrorCode::kInvalidArgument, "voicing mask does not match the frame grid");
  }
  if (db.empty()) return segments_from_pauses({}, total);
  const double max_db = *std::max_element(db.begin(), db.end());

  std::vector<bool> silent(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    silent[i] = !voicing.voiced[i] && (!std::isfinite(max_db) || db[i] < max_db - kSilenceMarginDb);
  }

  struct Run {
    std::size_t first, last;
    double start, end;  // samples
  };
  std::vector<Run> runs;
  const double n = static_cast<double>(signal.size());
  const double h = static_cast<double>(hop), l = static_cast<double>(len);
  for (std::size_t i = 0; i < silent.size();) {
    if (!silent[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < silent.size() && silent[j + 1]) ++j;
    Run r{i, j, 0.0, n};
    r.start = i == 0 ? 0.0 : static_cast<double>(i) * h - h / 2.0;
    r.end = j + 1 == silent.size() ? n : static_cast<double>(j) * h + l + h / 2.0;
    runs.push_back(r);
    i = j + 1;
  }
  for (std::size_t k = 1; k < runs.size(); ++k) {
    Run& a = runs[k - 1];
    Run& b = runs[k];
    if (b.start - a.end < h) {
      const double first_loud = static_cast<double>(a.last + 1);
      const double last_loud = static_cast<double>(b.first - 1);
      a.end = first_loud * h + l / 2.0 - h / 2.0;
      b.start = last_loud * h + l / 2.0 + h / 2.0;
    }
  }

  std::vector<std::pair<double, double>> pauses;
  for (const auto& r : runs) {
    const double s = std::clamp(r.start, 0.0, n) / rate;
    const double e = std::clamp(r.end, 0.0, n) / rate;
    if (e - s >= kMinPauseS) pauses.emplace_back(s, e);
  }
  return segments_from_pauses(pauses, total);
}

/// Sum of pause durations strictly longer than min_pause_ms.
inline double total_pause_time(const SegmentList& segments, double min_pause_ms) {
  const double min_s = min_pause_ms / 1000.0;
  double acc = 0.0;
  for (const auto& s : segments.segments) {
    if (s.kind == SegmentKind::kPause && s.duration_s() > min_s) acc += s.duration_s();
  }
  return acc;
}

struct VoiceBreaks {
  double count = 0.0;
  double degree_percent = 0.0;
};

/// Voice breaks: unvoiced frame runs of at least 90 ms inside a speech
/// segment with voiced frames on both sides. A frame belongs to the segment
/// containing its centre.
inline VoiceBreaks voice_breaks(const VoicingMask& voicing, const SegmentList& segments,
                                const FrameGrid& grid) {
  const double hop_s = grid.hop_ms / 1000.0;
  const double half_len_s = grid.frame_len_ms / 2000.0;
  double speech = 0.0, broken = 0.0;
  std::size_t count = 0;
  for (const auto& seg : segments.segments) {
    if (seg.kind != SegmentKind::kSpeech) continue;
    speech += seg.duration_s();
    std::vector<bool> v;
    for (std::size_t i = 0; i < voicing.size(); ++i) {
      const double centre = static_cast<double>(i) * hop_s + half_len_s;
      if (centre >= seg.start_s && centre < seg.end_s) v.push_back(voicing.voiced[i]);
    }
    for (std::size_t i = 0; i < v.size();) {
      if (v[i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < v.size() && !v[j]) ++j;
      const bool bounded = i > 0 && j < v.size();
      const double dur = static_cast<double>(j - i) * hop_s;
      if (bounded && dur >= kVoiceBreakMinS - 1e-9) {
        ++count;
        broken += dur;
      }
      i = j;
    }
  }
  if (!(speech > 0.0)) throw Error(ErrorCode::kNoSpeechContent, "zero speech duration");
  return {static_cast<double>(count), 100.0 * broken / speech};
}

/// Envelope peaks usable as syllable nuclei: local maxima of the 50 ms
/// smoothed frame-RMS envelope (dB) that are voiced, at least 2 dB above the
/// lowest point since the previous nucleus, and 150 ms after it. Returns
/// frame indices.
inline std::vector<std::size_t> syllable_nuclei(const AudioSignal& signal, const FrameGrid& grid,
                                                const VoicingMask& voicing) {
  const int rate = signal.sample_rate_hz();
  const std::size_t len = grid.frame_len_samples(rate);
  const std::size_t hop = grid.hop_samples(rate);
  const auto x = signal.samples();
  if (x.size() < len) return {};
  const std::size_t count = (x.size() - len) / hop + 1;
  if (voicing.size() != count) {
    throw Error(ErrorCode::kInvalidArgument, "voicing mask does not match the frame grid");
  }
  std::vector<double> rms(count);
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < len; ++k) acc += x[i * hop + k] * x[i * hop + k];
    rms[i] = std::sqrt(acc / static_cast<double>(len));
  }
  const double hop_s = static_cast<double>(hop) / rate;
  const auto half = static_cast<std::size_t>(std::llround(0.050 / hop_s)) / 2;
  std::vector<double> env(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(count - 1, i + half);
    double acc = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) acc += rms[k];
    const double m = acc / static_cast<double>(hi - lo + 1);
    env[i] = m > 0.0 ? 20.0 * std::log10(m) : -std::numeric_limits<double>::infinity();
  }

  constexpr double kMinRiseDb = 2.0;
  constexpr double kMinSpacingS = 0.150;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> nuclei;
  double dip = neg_inf;
  double last_t = neg_inf;
  for (std::size_t i = 0; i < count; ++i) {
    dip = std::min(dip, env[i]);
    const double left = i > 0 ? env[i - 1] : neg_inf;
    const double right = i + 1 < count ? env[i + 1] : neg_inf;
    const bool peak = env[i] >= left && env[i] > right && std::isfinite(env[i]);
    const double t = static_cast<double>(i) * hop_s;
    if (peak && voicing.voiced[i] && env[i] - dip >= kMinRiseDb && t - last_t >= kMinSpacingS) {
      nuclei.push_back(i);
      last_t = t;
      dip = env[i];
    }
  }
  return nuclei;
}

/// Syllable nuclei per second of net phonation (total duration minus pauses
/// longer than 50 ms).
inline double articulation_rate(const AudioSignal& signal, const FrameGrid& grid,
                                const VoicingMask& voicing, const SegmentList& segments) {
  std::size_t speech_segments = 0;
  for (const auto& s : segments.segments) speech_segments += s.kind == SegmentKind::kSpeech;
  const double net = segments.total_duration_s - total_pause_time(segments, kFluencyPauseS * 1000.0);
  if (speech_segments == 0 || !(net > 1e-9)) {
    throw Error(ErrorCode::kNoSpeechContent, "zero net phonation time");
  }
  return static_cast<double>(syllable_nuclei(signal, grid, voicing).size()) / net;
}

/// Pauses longer than 50 ms per minute of recording.
inline double spir(const SegmentList& segments) {
  if (!(segments.total_duration_s > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "recording has zero duration");
  }
  return 60.0 * static_cast<double>(segments.pause_count(kFluencyPauseS)) / segments.total_duration_s;
}

}  // namespace hdspeech
