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

// Signal generators and fixtures shared by the test binaries.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hdspeech/hdspeech.hpp"

namespace hdspeech::testing {

inline std::vector<double> sine(double freq_hz, double amplitude, std::size_t n, int rate, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / rate + phase);
  }
  return x;
}

inline std::vector<double> silence(std::size_t n) { return std::vector<double>(n, 0.0); }

inline std::vector<double> white_noise(std::size_t n, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sd);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

inline std::vector<double> concat(std::initializer_list<std::vector<double>> parts) {
  std::vector<double> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline std::vector<double> defined(const Contour& c) {
  std::vector<double> out;
  for (const auto& v : c.values) {
    if (v) out.push_back(*v);
  }
  return out;
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::size_t frame_count(std::size_t samples, std::size_t len, std::size_t hop) {
  return samples < len ? 0 : (samples - len) / hop + 1;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("hdspeech_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Two-class matrix of noise columns named n0..n{d-1}; PD rows first.
inline FeatureMatrix noise_matrix(std::size_t n_pd, std::size_t n_hc, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  FeatureMatrix m;
  for (std::size_t j = 0; j < d; ++j) m.feature_names.push_back("n" + std::to_string(j));
  for (std::size_t i = 0; i < n_pd + n_hc; ++i) {
    FeatureRow r{"r" + std::to_string(i), i < n_pd ? Label::kPD : Label::kHC, {}};
    for (std::size_t j = 0; j < d; ++j) r.values.push_back(g(rng));
    m.rows.push_back(std::move(r));
  }
  return m;
}

}  // namespace hdspeech::testing
