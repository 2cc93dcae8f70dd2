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

// Energy, crossing and spectral contours: STE, TEO, ZCR, SF, MPSD, VTI.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "hdspeech/audio_io.hpp"
#include "hdspeech/contour.hpp"
#include "hdspeech/error.hpp"
#include "hdspeech/spectrum.hpp"

namespace hdspeech {

/// Mean of squared samples per frame. Expects rectangular frames.
inline Contour short_time_energy(const FrameSeries& frames) {
  Contour out = make_contour("STE", frames.size(), frames.frame_start_s);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    double acc = 0.0;
    for (double v : frames.frames[i]) acc += v * v;
    out.values[i] = acc / static_cast<double>(frames.frame_len());
  }
  return out;
}

/// Mean Teager energy x(n)^2 - x(n-1)x(n+1) over each unwindowed frame.
inline Contour teager_energy(const AudioSignal& signal, const FrameGrid& grid) {
  const auto x = signal.samples();
  if (x.size() < 3) throw Error(ErrorCode::kSignalTooShort, "Teager energy needs 3 samples");
  const int rate = signal.sample_rate_hz();
  grid.validate(rate);
  const std::size_t len = grid.frame_len_samples(rate);
  const std::size_t hop = grid.hop_samples(rate);
  if (x.size() < len) throw Error(ErrorCode::kSignalTooShort, "signal shorter than one frame");
  const std::size_t count = (x.size() - len) / hop + 1;

  std::vector<double> psi(x.size(), 0.0);
  for (std::size_t n = 1; n + 1 < x.size(); ++n) psi[n] = x[n] * x[n] - x[n - 1] * x[n + 1];

  std::vector<double> starts(count);
  for (std::size_t i = 0; i < count; ++i) starts[i] = static_cast<double>(i * hop) / rate;
  Contour out = make_contour("TEO", count, starts);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t lo = std::max<std::size_t>(i * hop, 1);
    const std::size_t hi = std::min(i * hop + len, x.size() - 1);
    double acc = 0.0;
    for (std::size_t n = lo; n < hi; ++n) acc += psi[n];
    out.values[i] = hi > lo ? acc / static_cast<double>(hi - lo) : 0.0;
  }
  return out;
}

/// Sign changes between consecutive samples over (len - 1). A zero sample
/// inherits the previous nonzero sign. Expects rectangular frames.
inline Contour zero_crossing_rate(const FrameSeries& frames) {
  Contour out = make_contour("ZCR", frames.size(), frames.frame_start_s);
  const std::size_t len = frames.frame_len();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    int sign = 0;
    std::size_t crossings = 0;
    for (double v : frames.frames[i]) {
      const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
      if (s == 0) continue;
      if (sign != 0 && s != sign) ++crossings;
      sign = s;
    }
    out.values[i] = len > 1 ? static_cast<double>(crossings) / static_cast<double>(len - 1) : 0.0;
  }
  return out;
}

/// Squared distance between two magnitude spectra after scaling each to unit
/// Euclidean norm (an all-zero spectrum stays the zero vector).
inline double normalized_flux(std::span<const double> prev, std::span<const double> cur) {
  auto norm = [](std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
  };
  const double np = norm(prev), nc = norm(cur);
  const std::size_t n = std::min(prev.size(), cur.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = np > 0.0 ? prev[k] / np : 0.0;
    const double b = nc > 0.0 ? cur[k] / nc : 0.0;
    acc += (b - a) * (b - a);
  }
  return acc;
}

/// Spectral flux between consecutive frames; frame 0 is undefined.
inline Contour spectral_flux(const FrameSeries& frames) {
  Contour out = make_contour("SF", frames.size(), frames.frame_start_s);
  std::vector<double> prev;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    auto mag = magnitude_spectrum(frames.frames[i]);
    if (i > 0) out.values[i] = normalized_flux(prev, mag);
    prev = std::move(mag);
  }
  return out;
}

namespace detail {
inline double window_energy(const FrameSeries& frames) {
  const auto w = window_coefficients(frames.grid.window, frames.frame_len());
  double acc = 0.0;
  for (double v : w) acc += v * v;
  return acc;
}
}  // namespace detail

/// Median of the one-sided periodogram bins of each frame.
inline Contour median_psd(const FrameSeries& frames) {
  Contour out = make_contour("MPSD", frames.size(), frames.frame_start_s);
  const double we = detail::window_energy(frames);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    auto p = periodogram(frames.frames[i], we);
    const std::size_t mid = p.size() / 2;
    std::nth_element(p.begin(), p.begin() + static_cast<long>(mid), p.end());
    double med = p[mid];
    if (p.size() % 2 == 0) {
      med = 0.5 * (med + *std::max_element(p.begin(), p.begin() + static_cast<long>(mid)));
    }
    out.values[i] = med;
  }
  return out;
}

inline constexpr double kVtiHighLoHz = 2800.0, kVtiHighHiHz = 5800.0;
inline constexpr double kVtiLowLoHz = 70.0, kVtiLowHiHz = 4500.0;

/// Voice turbulence index: periodogram power in 2800-5800 Hz over power in
/// 70-4500 Hz, voiced frames only. Needs an analysis rate of at least 12 kHz.
inline Contour vti(const FrameSeries& frames, const VoicingMask& voicing) {
  if (frames.origin_rate_hz < 12000) {
    throw Error(ErrorCode::kInvalidArgument, "VTI needs an analysis rate of at least 12 kHz");
  }
  if (voicing.size() != frames.size()) {
    throw Error(ErrorCode::kInvalidArgument, "voicing not aligned with frames");
  }
  Contour out = make_contour("VTI", frames.size(), frames.frame_start_s);
  const double we = detail::window_energy(frames);
  const double bin_hz = static_cast<double>(frames.origin_rate_hz) / static_cast<double>(frames.frame_len());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!voicing.voiced[i]) continue;
    const auto p = periodogram(frames.frames[i], we);
    double high = 0.0, low = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      if (f >= kVtiHighLoHz && f <= kVtiHighHiHz) high += p[k];
      if (f >= kVtiLowLoHz && f <= kVtiLowHiHz) low += p[k];
    }
    out.values[i] = high / std::max(low, 1e-12);
  }
  return out;
}

}  // namespace hdspeech
