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
 * @file formants.hpp
 * @brief LPC formant tracking (F1-F3 and bandwidths B1-B3).
 *
 * The signal is resampled to 10 kHz and pre-emphasized (0.97). Each voiced
 * frame gets an order-12 autocorrelation-method predictor; roots of the
 * predictor polynomial in the upper half plane become (frequency, bandwidth)
 * candidates, and the three lowest candidates inside (90, 4800) Hz with
 * bandwidth below 700 Hz are F1..F3.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hdspeech/audio_io.hpp"
#include "hdspeech/contour.hpp"
#include "hdspeech/error.hpp"

namespace hdspeech {

inline constexpr int kFormantRateHz = 10000;
inline constexpr int kLpcOrder = 12;
inline constexpr double kPreEmphasis = 0.97;

/// Levinson-Durbin recursion. Returns a[0..order] with a[0] = 1 such that
/// A(z) = sum a[k] z^-k whitens the process with autocorrelation r, or
/// nullopt when the recursion becomes unstable.
inline std::optional<std::vector<double>> levinson_durbin(std::span<const double> r, int order) {
  if (static_cast<int>(r.size()) <= order || !(r[0] > 0.0)) return std::nullopt;
  std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0), prev;
  a[0] = 1.0;
  double err = r[0];
  for (int i = 1; i <= order; ++i) {
    double acc = r[static_cast<std::size_t>(i)];
    for (int j = 1; j < i; ++j) acc += a[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(i - j)];
    const double k = -acc / err;
    if (!std::isfinite(k) || std::abs(k) >= 1.0) return std::nullopt;
    prev = a;
    for (int j = 1; j < i; ++j) {
      a[static_cast<std::size_t>(j)] = prev[static_cast<std::size_t>(j)] + k * prev[static_cast<std::size_t>(i - j)];
    }
    a[static_cast<std::size_t>(i)] = k;
    err *= 1.0 - k * k;
    if (!(err > 0.0)) return std::nullopt;
  }
  return a;
}

/// Roots of z^p + a1 z^(p-1) + ... + ap via companion-matrix eigenvalues.
inline std::vector<std::complex<double>> predictor_roots(std::span<const double> a) {
  const Eigen::Index p = static_cast<Eigen::Index>(a.size()) - 1;
  if (p < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = -a[static_cast<std::size_t>(j + 1)];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) return {};
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
  return roots;
}

struct FormantTrack {
  std::array<Contour, 3> frequency;  // F1, F2, F3
  std::array<Contour, 3> bandwidth;  // B1, B2, B3
};

/// Formant candidates (frequency Hz, bandwidth Hz) of one pre-emphasized
/// frame, ascending by frequency.
inline std::vector<std::pair<double, double>> formant_candidates(std::span<const double> frame,
                                                                  double rate) {
  const std::size_t n = frame.size();
  const auto w = window_coefficients(WindowKind::kHann, n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = frame[i] * w[i];
  std::array<double, kLpcOrder + 1> r{};
  for (int lag = 0; lag <= kLpcOrder; ++lag) {
    double acc = 0.0;
    for (std::size_t i = static_cast<std::size_t>(lag); i < n; ++i) acc += x[i] * x[i - static_cast<std::size_t>(lag)];
    r[static_cast<std::size_t>(lag)] = acc;
  }
  std::vector<std::pair<double, double>> out;
  const auto a = levinson_durbin(r, kLpcOrder);
  if (!a) return out;
  for (const auto& z : predictor_roots(*a)) {
    if (z.imag() <= 0.0) continue;
    const double freq = rate * std::arg(z) / (2.0 * std::numbers::pi);
    const double bw = -(rate / std::numbers::pi) * std::log(std::abs(z));
    if (freq > 90.0 && freq < 4800.0 && bw < 700.0 && std::isfinite(bw)) out.emplace_back(freq, bw);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Six contours aligned with `grid` applied to `signal`; frames that are
/// unvoiced, run past the 10 kHz copy, or yield fewer than three candidates
/// stay undefined.
inline FormantTrack estimate_formants(const AudioSignal& signal, const FrameGrid& grid,
                                      const VoicingMask& voicing) {
  const int rate = signal.sample_rate_hz();
  grid.validate(rate);
  const std::size_t len = grid.frame_len_samples(rate);
  const std::size_t hop = grid.hop_samples(rate);
  const std::size_t frames = signal.size() >= len ? (signal.size() - len) / hop + 1 : 0;
  if (voicing.size() != frames) {
    throw Error(ErrorCode::kInvalidArgument, "voicing mask does not match the frame grid");
  }
  std::vector<double> starts(frames);
  for (std::size_t i = 0; i < frames; ++i) starts[i] = static_cast<double>(i * hop) / rate;

  FormantTrack out;
  static constexpr std::array<const char*, 3> kF = {"F1", "F2", "F3"};
  static constexpr std::array<const char*, 3> kB = {"B1", "B2", "B3"};
  for (int k = 0; k < 3; ++k) {
    out.frequency[static_cast<std::size_t>(k)] = make_contour(kF[static_cast<std::size_t>(k)], frames, starts);
    out.bandwidth[static_cast<std::size_t>(k)] = make_contour(kB[static_cast<std::size_t>(k)], frames, starts);
  }
  if (voicing.voiced_count() == 0) return out;

  const AudioSignal low = resample(signal, kFormantRateHz);
  const auto x = low.samples();
  std::vector<double> emph(x.size());
  emph[0] = x[0];
  for (std::size_t i = 1; i < x.size(); ++i) emph[i] = x[i] - kPreEmphasis * x[i - 1];

  const std::size_t len_low = grid.frame_len_samples(kFormantRateHz);
  for (std::size_t i = 0; i < frames; ++i) {
    if (!voicing.voiced[i]) continue;
    const auto start = static_cast<std::size_t>(std::llround(starts[i] * kFormantRateHz));
    if (start + len_low > emph.size()) continue;
    const auto cands = formant_candidates(std::span<const double>(emph).subspan(start, len_low), kFormantRateHz);
    if (cands.size() < 3) continue;
    for (std::size_t k = 0; k < 3; ++k) {
      out.frequency[k].values[i] = cands[k].first;
      out.bandwidth[k].values[i] = cands[k].second;
    }
  }
  return out;
}

}  // namespace hdspeech
