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
 * @file pitch.hpp
 * @brief Autocorrelation pitch tracking, harmonics-to-noise ratio and pitch
 * period entropy.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hdspeech/audio_io.hpp"
#include "hdspeech/contour.hpp"
#include "hdspeech/error.hpp"

namespace hdspeech {

struct PitchTrack {
  Contour f0;
  VoicingMask voicing;
};

inline constexpr double kVoicingThreshold = 0.45;
inline constexpr double kVoicingEnergyMarginDb = 30.0;

/// Cross-normalized autocorrelation of a frame with itself shifted by `lag`:
/// sum x[n]x[n+lag] / sqrt(sum x[n]^2 * sum x[n+lag]^2) over the overlap.
inline double normalized_autocorrelation(std::span<const double> x, std::size_t lag) {
  if (lag >= x.size()) return 0.0;
  const std::size_t n = x.size() - lag;
  double num = 0.0, e0 = 0.0, e1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += x[i] * x[i + lag];
    e0 += x[i] * x[i];
    e1 += x[i + lag] * x[i + lag];
  }
  if (e0 <= 0.0 || e1 <= 0.0) return 0.0;
  return num / std::sqrt(e0 * e1);
}

namespace detail {

inline std::vector<double> frames_rms_db(const FrameSeries& frames) {
  std::vector<double> db(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    double acc = 0.0;
    for (double v : frames.frames[i]) acc += v * v;
    const double rms = std::sqrt(acc / static_cast<double>(frames.frame_len()));
    db[i] = rms > 0.0 ? 20.0 * std::log10(rms) : -std::numeric_limits<double>::infinity();
  }
  return db;
}

/// Value of the parabola through (-1, a), (0, b), (1, c) at offset d.
inline double parabola_at(double a, double b, double c, double d) {
  return b + 0.5 * d * (c - a) + 0.5 * d * d * (a - 2.0 * b + c);
}

}  // namespace detail

/// Per-frame F0 from the normalized autocorrelation over lags
/// [rate/f_max, rate/f_min]. A frame is voiced when its correlation peak
/// reaches 0.45 and its RMS is within 30 dB of the loudest frame.
///
/// Perfectly periodic input correlates equally well at every multiple of the
/// period, so the chosen peak is the shortest-lag local maximum within 3 % of
/// the global maximum rather than the raw argmax.
inline PitchTrack estimate_f0(const FrameSeries& frames, double f_min_hz = 60.0,
                              double f_max_hz = 400.0) {
  if (frames.size() == 0) throw Error(ErrorCode::kInvalidArgument, "empty frame series");
  const double rate = frames.origin_rate_hz;
  if (!(f_min_hz > 0.0 && f_min_hz < f_max_hz && f_max_hz < rate / 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < f_min < f_max < rate/2");
  }
  const std::size_t len = frames.frame_len();
  const std::size_t lag_min = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(rate / f_max_hz)));
  const std::size_t lag_max = std::min<std::size_t>(len - 2, static_cast<std::size_t>(std::ceil(rate / f_min_hz)));

  PitchTrack out;
  out.f0 = make_contour("F0", frames.size(), frames.frame_start_s);
  out.voicing.voiced.assign(frames.size(), false);
  if (lag_min >= lag_max) return out;

  const auto db = detail::frames_rms_db(frames);
  const double max_db = *std::max_element(db.begin(), db.end());
  if (!std::isfinite(max_db)) return out;

  std::vector<double> r(lag_max + 2, 0.0);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!(db[i] >= max_db - kVoicingEnergyMarginDb)) continue;
    const std::span<const double> x = frames.frames[i];
    for (std::size_t lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
      r[lag] = normalized_autocorrelation(x, lag);
    }
    double r_max = -1.0;
    for (std::size_t lag = lag_min; lag <= lag_max; ++lag) r_max = std::max(r_max, r[lag]);

    std::size_t best = 0;
    for (std::size_t lag = lag_min; lag <= lag_max; ++lag) {
      const bool local_max = r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1];
      if (local_max && r[lag] >= 0.97 * r_max) {
        best = lag;
        break;
      }
    }
    if (best == 0) {
      best = static_cast<std::size_t>(
          std::max_element(r.begin() + static_cast<long>(lag_min), r.begin() + static_cast<long>(lag_max) + 1) -
          r.begin());
    }
    if (r[best] < kVoicingThreshold) continue;

    const double a = r[best - 1], b = r[best], c = r[best + 1];
    const double denom = a - 2.0 * b + c;
    double delta = denom < 0.0 ? 0.5 * (a - c) / denom : 0.0;
    delta = std::clamp(delta, -0.5, 0.5);
    out.voicing.voiced[i] = true;
    out.f0.values[i] = rate / (static_cast<double>(best) + delta);
  }
  return out;
}

/// 10*log10(r/(1-r)) from the autocorrelation at the pitch period, clamped to
/// [-20, 40] dB. Unvoiced frames stay undefined.
inline Contour hnr(const FrameSeries& frames, const Contour& f0, const VoicingMask& voicing) {
  if (f0.size() != frames.size() || voicing.size() != frames.size()) {
    throw Error(ErrorCode::kInvalidArgument, "f0/voicing not aligned with frames");
  }
  constexpr double kMinDb = -20.0, kMaxDb = 40.0;
  Contour out = make_contour("HNR", frames.size(), frames.frame_start_s);
  const double rate = frames.origin_rate_hz;
  const std::size_t len = frames.frame_len();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!voicing.voiced[i] || !f0.values[i]) continue;
    const double period = rate / *f0.values[i];
    const auto lag = static_cast<std::size_t>(std::llround(period));
    if (lag < 1 || lag + 2 >= len) continue;
    const std::span<const double> x = frames.frames[i];
    const double r = detail::parabola_at(normalized_autocorrelation(x, lag - 1),
                                         normalized_autocorrelation(x, lag),
                                         normalized_autocorrelation(x, lag + 1),
                                         period - static_cast<double>(lag));
    double db;
    if (r >= 1.0) {
      db = kMaxDb;
    } else if (r <= 0.0) {
      db = kMinDb;
    } else {
      db = std::clamp(10.0 * std::log10(r / (1.0 - r)), kMinDb, kMaxDb);
    }
    out.values[i] = db;
  }
  return out;
}

inline constexpr int kPpeBins = 30;
inline constexpr double kPpeRangeSemitones = 1.5;
inline constexpr std::size_t kPpeMinVoicedFrames = 30;

/// Normalized Shannon entropy (divided by ln 30) of residuals histogrammed
/// into 30 equal bins over [-1.5, 1.5] semitones; out-of-range values land
/// in the edge bins.
inline double residual_entropy(std::span<const double> residuals) {
  if (residuals.empty()) return 0.0;
  std::array<double, kPpeBins> hist{};
  const double width = 2.0 * kPpeRangeSemitones / kPpeBins;
  for (double e : residuals) {
    auto bin = static_cast<long>(std::floor((e + kPpeRangeSemitones) / width));
    bin = std::clamp<long>(bin, 0, kPpeBins - 1);
    hist[static_cast<std::size_t>(bin)] += 1.0;
  }
  double h = 0.0;
  const double total = static_cast<double>(residuals.size());
  for (double c : hist) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log(p);
    }
  }
  return h / std::log(static_cast<double>(kPpeBins));
}

/// Pitch period entropy in [0, 1]. Voiced F0 is mapped to semitones around
/// the recording's own median, whitened by an order-2 least-squares linear
/// predictor, and the residual distribution's entropy is returned.
inline double pitch_period_entropy(const Contour& f0, const VoicingMask& voicing) {
  if (f0.size() != voicing.size()) {
    throw Error(ErrorCode::kInvalidArgument, "f0 and voicing lengths differ");
  }
  std::vector<double> hz;
  for (std::size_t i = 0; i < f0.size(); ++i) {
    if (voicing.voiced[i] && f0.values[i]) hz.push_back(*f0.values[i]);
  }
  if (hz.size() < kPpeMinVoicedFrames) {
    throw Error(ErrorCode::kInsufficientVoicedSpeech,
                std::to_string(hz.size()) + " voiced frames, need " +
                    std::to_string(kPpeMinVoicedFrames));
  }
  std::vector<double> sorted = hz;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2), sorted.end());
  double median = sorted[sorted.size() / 2];
  if (sorted.size() % 2 == 0) {
    const double lower = *std::max_element(sorted.begin(), sorted.begin() + static_cast<long>(sorted.size() / 2));
    median = 0.5 * (median + lower);
  }

  const Eigen::Index n = static_cast<Eigen::Index>(hz.size());
  Eigen::VectorXd s(n);
  for (Eigen::Index t = 0; t < n; ++t) s[t] = 12.0 * std::log2(hz[static_cast<std::size_t>(t)] / median);

  const Eigen::Index rows = n - 2;
  Eigen::MatrixXd lagged(rows, 2);
  Eigen::VectorXd target(rows);
  for (Eigen::Index t = 0; t < rows; ++t) {
    lagged(t, 0) = s[t + 1];
    lagged(t, 1) = s[t];
    target[t] = s[t + 2];
  }
  const Eigen::Vector2d coeffs = lagged.completeOrthogonalDecomposition().solve(target);
  const Eigen::VectorXd resid = target - lagged * coeffs;
  std::vector<double> residuals(resid.data(), resid.data() + resid.size());
  return residual_entropy(residuals);
}

}  // namespace hdspeech
