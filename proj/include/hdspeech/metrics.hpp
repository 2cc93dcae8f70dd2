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

#include <cmath>
#include <cstdint>

#include "hdspeech/error.hpp"

namespace hdspeech {

/// Binary confusion counts with PD as the positive class.
struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const noexcept { return tp + fp + tn + fn; }
  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  bool operator==(const Confusion&) const = default;
};

struct Metrics {
  double mcc = 0.0;
  double acc = 0.0;
  double sen = 0.0;
  double spe = 0.0;
};

/// MCC, accuracy, sensitivity and specificity. MCC is 0 when any marginal
/// sum is 0; SEN (SPE) is 0 when there are no positives (negatives).
inline Metrics metrics(const Confusion& c) {
  if (c.tp < 0 || c.fp < 0 || c.tn < 0 || c.fn < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative confusion count");
  }
  if (c.total() == 0) throw Error(ErrorCode::kInvalidArgument, "empty confusion matrix");
  const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
  Metrics m;
  const double prod = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  m.mcc = prod > 0.0 ? (tp * tn - fp * fn) / std::sqrt(prod) : 0.0;
  m.acc = (tp + tn) / static_cast<double>(c.total());
  m.sen = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
  m.spe = tn + fp > 0.0 ? tn / (tn + fp) : 0.0;
  return m;
}

}  // namespace hdspeech
