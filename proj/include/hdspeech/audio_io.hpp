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
 * @file audio_io.hpp
 * @brief WAV input, resampling, edge-silence trimming and framing.
 *
 * Every extractor in the library runs on a signal that went through
 * read_wav -> resample(kAnalysisRateHz) -> trim_edge_silence -> frame_signal.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hdspeech/error.hpp"

namespace hdspeech {

/// Rate every extractor works at.
inline constexpr int kAnalysisRateHz = 16000;
inline constexpr int kMinSampleRateHz = 8000;

/// Mono samples plus their rate. Construction validates: non-empty, finite,
/// rate >= 8 kHz. Immutable afterwards.
class AudioSignal {
 public:
  AudioSignal(std::vector<double> samples, int sample_rate_hz)
      : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
    if (samples_.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "audio signal is empty");
    }
    if (sample_rate_hz_ < kMinSampleRateHz) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sample rate " + std::to_string(sample_rate_hz_) +
                      " Hz is below 8000 Hz");
    }
    for (double v : samples_) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidArgument, "non-finite audio sample");
      }
    }
  }

  std::span<const double> samples() const noexcept { return samples_; }
  int sample_rate_hz() const noexcept { return sample_rate_hz_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

 private:
  std::vector<double> samples_;
  int sample_rate_hz_;
};

enum class WindowKind { kRectangular, kHann };

/// Framing parameters in milliseconds; sample counts are derived per rate.
struct FrameGrid {
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  WindowKind window = WindowKind::kHann;

  std::size_t frame_len_samples(int rate_hz) const {
    return static_cast<std::size_t>(std::floor(frame_len_ms * rate_hz / 1000.0 + 1e-9));
  }
  std::size_t hop_samples(int rate_hz) const {
    return static_cast<std::size_t>(std::floor(hop_ms * rate_hz / 1000.0 + 1e-9));
  }

  FrameGrid with_window(WindowKind w) const {
    FrameGrid g = *this;
    g.window = w;
    return g;
  }

  void validate(int rate_hz) const {
    if (!(frame_len_ms > 0.0) || !(hop_ms > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "frame length and hop must be positive");
    }
    if (frame_len_ms < hop_ms) {
      throw Error(ErrorCode::kInvalidArgument, "frame length must be >= hop");
    }
    if (frame_len_samples(rate_hz) < 2 || hop_samples(rate_hz) < 1) {
      throw Error(ErrorCode::kInvalidArgument, "frame shorter than two samples");
    }
  }
};

/// Fixed-length windowed blocks cut from one signal.
struct FrameSeries {
  std::vector<std::vector<double>> frames;
  FrameGrid grid;
  int origin_rate_hz = 0;
  std::vector<double> frame_start_s;

  std::size_t size() const noexcept { return frames.size(); }
  std::size_t frame_len() const noexcept { return frames.empty() ? 0 : frames.front().size(); }
};

/// Symmetric window of `len` taps; Hann endpoints are exactly zero.
inline std::vector<double> window_coefficients(WindowKind kind, std::size_t len) {
  std::vector<double> w(len, 1.0);
  if (kind == WindowKind::kHann && len > 1) {
    for (std::size_t n = 0; n < len; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                  static_cast<double>(len - 1));
    }
    w.front() = 0.0;
    w.back() = 0.0;
  }
  return w;
}

namespace detail {

inline std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace detail

/// Reads a RIFF/WAVE file holding PCM16 or float32 samples, mono or stereo.
/// Stereo is averaged to mono; PCM16 is scaled by 1/32768.
inline AudioSignal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kMalformedHeader, where + ": not a RIFF/WAVE container");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t chunk_len = detail::read_u32(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) {
      // Tolerate a truncated data chunk by clamping; anything else is broken.
      if (std::memcmp(hdr, "data", 4) != 0) {
        throw Error(ErrorCode::kMalformedHeader, where + ": chunk overruns file");
      }
    }
    const std::size_t avail = std::min<std::size_t>(chunk_len, bytes.size() - body);
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (avail < 16) throw Error(ErrorCode::kMalformedHeader, where + ": short fmt chunk");
      const unsigned char* f = bytes.data() + body;
      format = detail::read_u16(f);
      channels = detail::read_u16(f + 2);
      rate = detail::read_u32(f + 4);
      bits = detail::read_u16(f + 14);
      if (format == 0xFFFE) {  // WAVE_FORMAT_EXTENSIBLE: sub-format GUID at +24
        if (avail < 26) throw Error(ErrorCode::kMalformedHeader, where + ": short extensible fmt");
        format = detail::read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = avail;
    }
    pos = body + chunk_len + (chunk_len & 1u);
  }

  if (!have_fmt) throw Error(ErrorCode::kMalformedHeader, where + ": missing fmt chunk");
  if (data == nullptr) throw Error(ErrorCode::kMalformedHeader, where + ": missing data chunk");
  if (channels != 1 && channels != 2) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                where + ": " + std::to_string(channels) + " channels");
  }
  const bool pcm16 = format == 1 && bits == 16;
  const bool f32 = format == 3 && bits == 32;
  if (!pcm16 && !f32) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                where + ": format " + std::to_string(format) + " with " +
                    std::to_string(bits) + " bits");
  }
  if (rate < static_cast<std::uint32_t>(kMinSampleRateHz)) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                where + ": sample rate " + std::to_string(rate) + " Hz");
  }

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n = data_len / frame_bytes;
  if (n == 0) throw Error(ErrorCode::kMalformedHeader, where + ": no samples");

  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + i * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        acc += static_cast<std::int16_t>(detail::read_u16(p)) / 32768.0;
      } else {
        const std::uint32_t u = detail::read_u32(p);
        float v;
        std::memcpy(&v, &u, sizeof v);
        acc += static_cast<double>(v);
      }
    }
    samples[i] = acc / channels;
  }
  return AudioSignal(std::move(samples), static_cast<int>(rate));
}

/// Writes a mono PCM16 file. Samples are scaled by 32768, rounded and
/// clipped, so a file read by read_wav is reproduced bit-exactly.
inline void write_wav(const std::filesystem::path& path, const AudioSignal& signal) {
  const auto samples = signal.samples();
  const std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * 2);
  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  detail::put_u32(out, 36 + data_len);
  out += "WAVEfmt ";
  detail::put_u32(out, 16);
  detail::put_u16(out, 1);
  detail::put_u16(out, 1);
  detail::put_u32(out, static_cast<std::uint32_t>(signal.sample_rate_hz()));
  detail::put_u32(out, static_cast<std::uint32_t>(signal.sample_rate_hz()) * 2);
  detail::put_u16(out, 2);
  detail::put_u16(out, 16);
  out += "data";
  detail::put_u32(out, data_len);
  for (double v : samples) {
    const double scaled = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
    detail::put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

/// Kaiser-windowed sinc polyphase resampler. The cutoff sits at 0.475 of the
/// lower rate with a 0.05 transition band and ~100 dB stop band, so the pass
/// band below 0.45 x min(rates) is flat to well under 0.1 dB.
inline AudioSignal resample(const AudioSignal& signal, int target_rate_hz) {
  if (target_rate_hz < kMinSampleRateHz) {
    throw Error(ErrorCode::kInvalidArgument,
                "target rate " + std::to_string(target_rate_hz) + " Hz is below 8000 Hz");
  }
  const int in_rate = signal.sample_rate_hz();
  if (target_rate_hz == in_rate) return signal;

  const long g = std::gcd(static_cast<long>(in_rate), static_cast<long>(target_rate_hz));
  const long up = target_rate_hz / g;
  const long down = in_rate / g;

  // Everything below is in units of input samples.
  const double min_ratio = std::min(1.0, static_cast<double>(target_rate_hz) / in_rate);
  const double cutoff = 0.475 * min_ratio;
  const double transition = 0.05 * min_ratio;
  constexpr double kAttenuationDb = 100.0;
  const double beta = 0.1102 * (kAttenuationDb - 8.7);
  const long half = static_cast<long>(
      std::ceil((kAttenuationDb - 8.0) / (2.285 * 2.0 * std::numbers::pi * transition) / 2.0));
  const double i0_beta = std::cyl_bessel_i(0.0, beta);

  auto kernel = [&](double t) {
    const double x = t / (half + 1);
    if (std::abs(x) >= 1.0) return 0.0;
    const double w = std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - x * x)) / i0_beta;
    const double arg = 2.0 * cutoff * t;
    const double sinc = std::abs(arg) < 1e-12 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
    return 2.0 * cutoff * sinc * w;
  };

  // taps[p][j + half] = h(p/up + j) for j in [-half, half]
  const long width = 2 * half + 1;
  std::vector<double> taps(static_cast<std::size_t>(up * width));
  for (long p = 0; p < up; ++p) {
    double sum = 0.0;
    for (long j = -half; j <= half; ++j) {
      const double h = kernel(static_cast<double>(p) / up + j);
      taps[static_cast<std::size_t>(p * width + j + half)] = h;
      sum += h;
    }
    for (long j = 0; j < width; ++j) taps[static_cast<std::size_t>(p * width + j)] /= sum;
  }

  const auto x = signal.samples();
  const long n_in = static_cast<long>(x.size());
  const long n_out = std::max<long>(1, (n_in * up) / down);
  std::vector<double> y(static_cast<std::size_t>(n_out));
  for (long m = 0; m < n_out; ++m) {
    const long num = m * down;
    const long base = num / up;
    const long phase = num % up;
    const double* h = taps.data() + phase * width;
    double acc = 0.0;
    // y = sum_k x[k] h(t_m - k), t_m - k = phase/up + (base - k)
    const long j_lo = std::max(-half, base - (n_in - 1));
    const long j_hi = std::min(half, base);
    for (long j = j_lo; j <= j_hi; ++j) {
      acc += x[static_cast<std::size_t>(base - j)] * h[j + half];
    }
    y[static_cast<std::size_t>(m)] = acc;
  }
  return AudioSignal(std::move(y), target_rate_hz);
}

/// RMS in dB of each unwindowed frame; silent frames map to -inf.
inline std::vector<double> frame_rms_db(std::span<const double> x, std::size_t frame_len,
                                        std::size_t hop) {
  std::vector<double> out;
  if (x.size() < frame_len) return out;
  const std::size_t count = (x.size() - frame_len) / hop + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t n = 0; n < frame_len; ++n) {
      const double v = x[i * hop + n];
      acc += v * v;
    }
    const double rms = std::sqrt(acc / static_cast<double>(frame_len));
    out.push_back(rms > 0.0 ? 20.0 * std::log10(rms) : -std::numeric_limits<double>::infinity());
  }
  return out;
}

/// Cuts frames of floor(len_ms*rate/1000) samples every floor(hop_ms*rate/1000)
/// samples; the trailing partial frame is dropped.
inline FrameSeries frame_signal(const AudioSignal& signal, const FrameGrid& grid) {
  const int rate = signal.sample_rate_hz();
  grid.validate(rate);
  const std::size_t len = grid.frame_len_samples(rate);
  const std::size_t hop = grid.hop_samples(rate);
  if (signal.size() < len) {
    throw Error(ErrorCode::kSignalTooShort, "signal shorter than one frame");
  }
  const std::size_t count = (signal.size() - len) / hop + 1;
  const auto w = window_coefficients(grid.window, len);
  const auto x = signal.samples();

  FrameSeries fs;
  fs.grid = grid;
  fs.origin_rate_hz = rate;
  fs.frames.resize(count, std::vector<double>(len));
  fs.frame_start_s.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t n = 0; n < len; ++n) fs.frames[i][n] = x[i * hop + n] * w[n];
    fs.frame_start_s[i] = static_cast<double>(i * hop) / rate;
  }
  return fs;
}

/// Removes leading and trailing frames whose RMS is more than `margin_db`
/// below the loudest frame. A cut between a quiet and a loud frame is placed
/// half a hop inside the loud frame's leading (or trailing) hop, which is
/// unbiased for an abrupt onset.
inline AudioSignal trim_edge_silence(const AudioSignal& signal, const FrameGrid& grid,
                                     double margin_db = 30.0) {
  const int rate = signal.sample_rate_hz();
  grid.validate(rate);
  const std::size_t len = grid.frame_len_samples(rate);
  const std::size_t hop = grid.hop_samples(rate);
  if (signal.size() < len) {
    throw Error(ErrorCode::kSignalTooShort, "signal shorter than one frame");
  }
  const auto db = frame_rms_db(signal.samples(), len, hop);
  const double max_db = *std::max_element(db.begin(), db.end());
  if (!std::isfinite(max_db)) {
    throw Error(ErrorCode::kNoSpeechContent, "all frames are silent");
  }
  auto loud = [&](std::size_t i) { return db[i] >= max_db - margin_db; };
  std::size_t first = 0;
  while (!loud(first)) ++first;
  std::size_t last = db.size() - 1;
  while (!loud(last)) --last;

  const std::size_t n = signal.size();
  std::size_t begin = first == 0 ? 0 : first * hop + len - hop / 2;
  std::size_t end = last + 1 == db.size() ? n : last * hop + hop / 2;
  begin = std::min(begin, n);
  end = std::clamp(end, begin, n);
  if (end - begin < len) {
    // Keep at least one analysis frame around the loud region.
    begin = first * hop;
    end = std::min(n, std::max(last * hop + len, begin + len));
  }
  if (begin == 0 && end == n) return signal;
  const auto s = signal.samples();
  return AudioSignal(std::vector<double>(s.begin() + static_cast<long>(begin),
                                         s.begin() + static_cast<long>(end)),
                     rate);
}

}  // namespace hdspeech
