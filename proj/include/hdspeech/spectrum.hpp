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

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace hdspeech {

/// |X_k| for k = 0..N/2 of an N-point DFT (N = frame length, any size).
inline std::vector<double> magnitude_spectrum(std::span<const double> frame) {
  thread_local Eigen::FFT<double> fft;
  std::vector<double> in(frame.begin(), frame.end());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  const std::size_t bins = in.size() / 2 + 1;
  std::vector<double> mag(bins);
  for (std::size_t k = 0; k < bins; ++k) mag[k] = std::abs(out[k]);
  return mag;
}

/// One-sided periodogram |X_k|^2 / sum(w^2) for k = 0..N/2. For white noise
/// of variance s^2 every bin has expectation s^2.
inline std::vector<double> periodogram(std::span<const double> windowed_frame,
                                       double window_energy) {
  auto p = magnitude_spectrum(windowed_frame);
  const double scale = window_energy > 0.0 ? 1.0 / window_energy : 0.0;
  for (double& v : p) v = v * v * scale;
  return p;
}

}  // namespace hdspeech
