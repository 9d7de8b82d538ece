// Copyright 2026 The Voxmask Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOXMASK_ERROR_HPP_
#define VOXMASK_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace voxmask {

enum class ErrorKind {
  kMalformedWav,
  kUnsupportedEncoding,
  kIoFailure,
  kInvalidConfig,
  kInvalidArgument,
  kTooShort,
  kEmptyPeakSet,
  kInvalidAlpha,
  kNotInvertible,
  kTooFewFrames,
  kDimensionMismatch,
  kNotPositiveDefinite,
  kEmptyEnrollment,
  kMissingGender,
  kParseError,
  kInvariantViolation,
  kNoCrossover,
  kEmptyInput,
};

constexpr std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedWav: return "MalformedWav";
    case ErrorKind::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorKind::kIoFailure: return "IoFailure";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kTooShort: return "TooShort";
    case ErrorKind::kEmptyPeakSet: return "EmptyPeakSet";
    case ErrorKind::kInvalidAlpha: return "InvalidAlpha";
    case ErrorKind::kNotInvertible: return "NotInvertible";
    case ErrorKind::kTooFewFrames: return "TooFewFrames";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::kEmptyEnrollment: return "EmptyEnrollment";
    case ErrorKind::kMissingGender: return "MissingGender";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kInvariantViolation: return "InvariantViolation";
    case ErrorKind::kNoCrossover: return "NoCrossover";
    case ErrorKind::kEmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

// All library failures are reported as voxmask::Error. `line()` is non-zero
// only for parse errors that can be attributed to a 1-based input line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0)
      : std::runtime_error(Format(kind, message, line)),
        kind_(kind),
        line_(line) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string Format(ErrorKind kind, const std::string& message,
                            std::size_t line) {
    std::string out(ErrorKindName(kind));
    if (line != 0) out += " (line " + std::to_string(line) + ")";
    out += ": ";
    out += message;
    return out;
  }

  ErrorKind kind_;
  std::size_t line_;
};

}  // namespace voxmask

#endif  // VOXMASK_ERROR_HPP_
