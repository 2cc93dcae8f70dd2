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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hdspeech {

/// Contour bases in canonical feature-table order.
inline constexpr std::array<std::string_view, 14> kContourBases = {
    "F0", "F1", "F2", "F3", "B1", "B2", "B3", "STE", "TEO", "ZCR", "SF", "MPSD", "HNR", "VTI"};

/// Per-frame values; std::nullopt marks a frame the producing operation
/// gated out (unvoiced, first frame of a difference, numerical failure).
struct Contour {
  std::string base_name;
  std::vector<std::optional<double>> values;
  std::vector<double> frame_start_s;

  std::size_t size() const noexcept { return values.size(); }

  std::size_t defined_count() const noexcept {
    std::size_t n = 0;
    for (const auto& v : values) n += v.has_value();
    return n;
  }
};

struct VoicingMask {
  std::vector<bool> voiced;

  std::size_t size() const noexcept { return voiced.size(); }
  std::size_t voiced_count() const noexcept {
    std::size_t n = 0;
    for (bool v : voiced) n += v;
    return n;
  }
};

inline Contour make_contour(std::string base, std::size_t frames,
                            const std::vector<double>& frame_start_s) {
  Contour c;
  c.base_name = std::move(base);
  c.values.assign(frames, std::nullopt);
  c.frame_start_s = frame_start_s;
  return c;
}

}  // namespace hdspeech
