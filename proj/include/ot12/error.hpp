// Copyright 2026 The ot12 Authors
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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ot12 {

enum class ErrorCode : std::uint8_t {
  kZeroInverse,
  kExhaustedAttempts,
  kPreconditionViolation,
  kInvalidOverride,
  kParseError,
  kLengthMismatch,
  kInvalidStage,
  kMalformedMessage,
  kDegenerateD,
  kRecoveryFailed,
  kTagMismatch,
  kTimeout,
  kConnectionClosed,
  kIoError,
  kDigestMismatch,
  kOutOfRange,
  kBudgetExceeded,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Decode failures also report where in the input they happened.
class PositionedError : public Error {
 public:
  PositionedError(ErrorCode code, std::size_t offset, const std::string& what)
      : Error(code, what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace ot12
