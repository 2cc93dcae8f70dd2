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
 * @file synth.hpp
 * @brief Source-filter vowel synthesis and plan-driven recordings with
 * known ground truth.
 *
 * The source is a band-limited impulse train (sum of equal-amplitude
 * harmonics up to 0.45 of the rate) through a one-pole spectral tilt, then a
 * cascade of three second-order resonators. A vowel segment with
 * noise_snr_db = kNoiseOnly is pure white noise and stands for an unvoiced
 * stretch inside speech.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "hdspeech/audio_io.hpp"
#include "hdspeech/error.hpp"
#include "hdspeech/seeding.hpp"
#include "hdspeech/segmental.hpp"

namespace hdspeech {

inline constexpr double kNoiseOnly = -std::numeric_limits<double>::infinity();
inline constexpr double kSynthPeak = 0.7;
inline constexpr double kVibratoRateHz = 5.5;
inline constexpr double kSourceTilt = 0.95;
inline constexpr double kSynthFadeS = 0.002;
inline constexpr double kSynthPrerollS = 0.1;
inline constexpr double kMinSynthF0Hz = 60.0;
inline constexpr double kMaxSynthF0Hz = 400.0;

struct Formant {
  double freq_hz = 500.0;
  double bw_hz = 80.0;
};

using FormantSet = std::array<Formant, 3>;

enum class PlanKind { kVowel, kPause };

struct PlanSegment {
  PlanKind kind = PlanKind::kVowel;
  double duration_s = 0.5;
  double f0_hz = 150.0;
  double f0_vibrato_semitones = 0.0;
  FormantSet formants{{{700.0, 60.0}, {1220.0, 80.0}, {2600.0, 120.0}}};
  double noise_snr_db = 40.0;

  bool is_unvoiced() const noexcept { return kind == PlanKind::kVowel && noise_snr_db == kNoiseOnly; }
};

struct RecordingPlan {
  std::vector<PlanSegment> segments;
  int sample_rate_hz = kAnalysisRateHz;
};

namespace detail {

inline void validate_vowel(double f0_hz, const FormantSet& formants, double duration_s, int rate) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw Error(ErrorCode::kInvalidArgument, "segment duration must be positive");
  }
  if (rate < kMinSampleRateHz) throw Error(ErrorCode::kInvalidArgument, "sample rate below 8000 Hz");
  if (!(f0_hz >= kMinSynthF0Hz && f0_hz <= kMaxSynthF0Hz)) {
    throw Error(ErrorCode::kInvalidArgument, "f0 must lie in [60, 400] Hz");
  }
  double prev = 0.0;
  for (const auto& f : formants) {
    if (!(f.freq_hz > prev)) throw Error(ErrorCode::kInvalidArgument, "formant frequencies must ascend");
    if (f.freq_hz >= rate / 2.0) throw Error(ErrorCode::kInvalidArgument, "formant frequency at or above Nyquist");
    if (!(f.bw_hz > 0.0)) throw Error(ErrorCode::kInvalidArgument, "formant bandwidth must be positive");
    prev = f.freq_hz;
  }
}

/// Klatt-style digital resonator: y[n] = A x[n] + B y[n-1] + C y[n-2].
inline void resonate(std::vector<double>& x, double freq_hz, double bw_hz, int rate) {
  const double t = 1.0 / rate;
  const double c = -std::exp(-2.0 * std::numbers::pi * bw_hz * t);
  const double b = 2.0 * std::exp(-std::numbers::pi * bw_hz * t) * std::cos(2.0 * std::numbers::pi * freq_hz * t);
  const double a = 1.0 - b - c;
  double y1 = 0.0, y2 = 0.0;
  for (double& v : x) {
    const double y = a * v + b * y1 + c * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

}  // namespace detail

/// Synthesized vowel of round(duration_s * rate) samples, peak 0.7.
inline AudioSignal synth_vowel(double f0_hz, const FormantSet& formants, double duration_s, int rate,
                               double noise_snr_db, std::uint64_t seed, double vibrato_semitones = 0.0) {
  detail::validate_vowel(f0_hz, formants, duration_s, rate);
  if (std::isnan(noise_snr_db)) throw Error(ErrorCode::kInvalidArgument, "SNR is NaN");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate));
  const auto preroll = static_cast<std::size_t>(std::llround(kSynthPrerollS * rate));
  const std::size_t total = n + preroll;

  std::vector<double> voiced(n, 0.0);
  if (noise_snr_db != kNoiseOnly) {
    const double f0_max = f0_hz * std::exp2(std::abs(vibrato_semitones) / 12.0);
    const int harmonics = std::max(1, static_cast<int>(std::floor(0.45 * rate / f0_max)));
    std::vector<double> src(total);
    double phase = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      const double t = static_cast<double>(i) / rate;
      double phi;
      if (vibrato_semitones == 0.0) {
        phi = 2.0 * std::numbers::pi * f0_hz * t;
      } else {
        phi = phase;
        const double f = f0_hz * std::exp2(vibrato_semitones / 12.0 * std::sin(2.0 * std::numbers::pi * kVibratoRateHz * t));
        phase = std::fmod(phase + 2.0 * std::numbers::pi * f / rate, 2.0 * std::numbers::pi);
      }
      // sum_{k=1..K} cos(k phi) by the Chebyshev recurrence
      const double c1 = std::cos(phi);
      double prev = 1.0, cur = c1, sum = c1;
      for (int k = 2; k <= harmonics; ++k) {
        const double next = 2.0 * c1 * cur - prev;
        prev = cur;
        cur = next;
        sum += cur;
      }
      src[i] = sum;
    }
    double y = 0.0;
    for (double& v : src) {
      y = (1.0 - kSourceTilt) * v + kSourceTilt * y;
      v = y;
    }
    for (const auto& f : formants) detail::resonate(src, f.freq_hz, f.bw_hz, rate);
    std::copy(src.begin() + static_cast<long>(preroll), src.end(), voiced.begin());
  }

  double power = 0.0;
  for (double v : voiced) power += v * v;
  power /= static_cast<double>(n);

  std::vector<double> out = voiced;
  const bool noisy = noise_snr_db == kNoiseOnly || std::isfinite(noise_snr_db);
  if (noisy) {
    const double sd = noise_snr_db == kNoiseOnly ? 1.0 : std::sqrt(power / std::pow(10.0, noise_snr_db / 10.0));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (double& v : out) v += sd * g(rng);
  }
  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : out) v *= kSynthPeak / peak;
  }
  return AudioSignal(std::move(out), rate);
}

struct VowelTruth {
  double start_s = 0.0;
  double end_s = 0.0;
  bool voiced = true;
  double f0_hz = 0.0;
  double vibrato_semitones = 0.0;
  FormantSet formants{};
};

struct GroundTruth {
  std::vector<std::pair<double, double>> pauses;  // (start_s, end_s)
  std::vector<VowelTruth> vowels;
  double duration_s = 0.0;
  double total_pause_s = 0.0;
  int voice_breaks = 0;  // unvoiced vowel segments of >= 90 ms between voiced ones

  /// Vowel sounding at time t, or nullptr inside pauses.
  const VowelTruth* vowel_at(double t) const {
    for (const auto& v : vowels) {
      if (t >= v.start_s && t < v.end_s) return &v;
    }
    return nullptr;
  }

  /// Instantaneous synthesized F0 at time t; 0 where nothing voiced sounds.
  double f0_at(double t) const {
    const VowelTruth* v = vowel_at(t);
    if (v == nullptr || !v->voiced) return 0.0;
    if (v->vibrato_semitones == 0.0) return v->f0_hz;
    const double local = t - v->start_s + kSynthPrerollS;
    return v->f0_hz *
           std::exp2(v->vibrato_semitones / 12.0 * std::sin(2.0 * std::numbers::pi * kVibratoRateHz * local));
  }

  double total_pause_s_over(double min_s) const {
    double t = 0.0;
    for (const auto& [a, b] : pauses) {
      if (b - a > min_s) t += b - a;
    }
    return t;
  }
};

struct AssembledRecording {
  AudioSignal signal;
  GroundTruth truth;
};

/// Concatenates synthesized vowels (2 ms raised-cosine fades at both ends)
/// and exact silences. Segment boundaries fall on round(cumulative time *
/// rate) so the ground truth is exact to the sample.
inline AssembledRecording assemble_recording(const RecordingPlan& plan, std::uint64_t seed) {
  if (plan.segments.empty()) throw Error(ErrorCode::kInvalidArgument, "empty recording plan");
  const int rate = plan.sample_rate_hz;
  std::vector<double> samples;
  GroundTruth truth;
  double clock = 0.0;
  const auto fade = static_cast<std::size_t>(std::llround(kSynthFadeS * rate));
  for (std::size_t s = 0; s < plan.segments.size(); ++s) {
    const PlanSegment& seg = plan.segments[s];
    if (!(seg.duration_s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "segment duration must be positive");
    const auto begin = static_cast<std::size_t>(std::llround(clock * rate));
    clock += seg.duration_s;
    const auto end = static_cast<std::size_t>(std::llround(clock * rate));
    const double t0 = static_cast<double>(begin) / rate, t1 = static_cast<double>(end) / rate;
    if (seg.kind == PlanKind::kPause) {
      samples.resize(end, 0.0);
      truth.pauses.emplace_back(t0, t1);
      truth.total_pause_s += t1 - t0;
      continue;
    }
    const AudioSignal v = synth_vowel(seg.f0_hz, seg.formants, static_cast<double>(end - begin) / rate, rate,
                                      seg.noise_snr_db, derive_seed(seed, {s}), seg.f0_vibrato_semitones);
    std::vector<double> chunk(v.samples().begin(), v.samples().end());
    const std::size_t f = std::min(fade, chunk.size() / 2);
    for (std::size_t i = 0; i < f; ++i) {
      const double g = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(f));
      chunk[i] *= g;
      chunk[chunk.size() - 1 - i] *= g;
    }
    samples.insert(samples.end(), chunk.begin(), chunk.end());
    truth.vowels.push_back({t0, t1, !seg.is_unvoiced(), seg.f0_hz, seg.f0_vibrato_semitones, seg.formants});
  }
  for (std::size_t i = 1; i + 1 < plan.segments.size(); ++i) {
    const auto& p = plan.segments[i - 1];
    const auto& c = plan.segments[i];
    const auto& n = plan.segments[i + 1];
    const bool voiced_prev = p.kind == PlanKind::kVowel && !p.is_unvoiced();
    const bool voiced_next = n.kind == PlanKind::kVowel && !n.is_unvoiced();
    if (c.is_unvoiced() && voiced_prev && voiced_next && c.duration_s >= kVoiceBreakMinS) ++truth.voice_breaks;
  }
  truth.duration_s = static_cast<double>(samples.size()) / rate;
  return {AudioSignal(std::move(samples), rate), std::move(truth)};
}

}  // namespace hdspeech
