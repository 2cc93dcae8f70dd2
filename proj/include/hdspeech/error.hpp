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

#include <stdexcept>
#include <string>
#include <string_view>

namespace hdspeech {

/// Classifies every failure the library reports. Callers that need to branch
/// on the cause (the CLI maps some of these to exit codes) inspect `code()`.
enum class ErrorCode {
  kInvalidArgument,
  kMissingFile,
  kMalformedHeader,
  kUnsupportedEncoding,
  kIo,
  kNoSpeechContent,
  kSignalTooShort,
  kInsufficientVoicedSpeech,
  kZeroVariance,
  kSingleClass,
  kClassTooSmall,
  kSchemaMismatch,
  kMalformedInput,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kMissingFile: return "missing file";
    case ErrorCode::kMalformedHeader: return "malformed header";
    case ErrorCode::kUnsupportedEncoding: return "unsupported encoding";
    case ErrorCode::kIo: return "i/o failure";
    case ErrorCode::kNoSpeechContent: return "no speech content";
    case ErrorCode::kSignalTooShort: return "signal too short";
    case ErrorCode::kInsufficientVoicedSpeech: return "insufficient voiced speech";
    case ErrorCode::kZeroVariance: return "zero variance";
    case ErrorCode::kSingleClass: return "single class";
    case ErrorCode::kClassTooSmall: return "class too small";
    case ErrorCode::kSchemaMismatch: return "schema mismatch";
    case ErrorCode::kMalformedInput: return "malformed input";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hdspeech
