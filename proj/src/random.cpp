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

#include "ot12/random.hpp"

#include <openssl/rand.h>

#include <array>
#include <bit>

#include "ot12/error.hpp"

namespace ot12 {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroInverse: return "ZeroInverse";
    case ErrorCode::kExhaustedAttempts: return "ExhaustedAttempts";
    case ErrorCode::kPreconditionViolation: return "PreconditionViolation";
    case ErrorCode::kInvalidOverride: return "InvalidOverride";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInvalidStage: return "InvalidStage";
    case ErrorCode::kMalformedMessage: return "MalformedMessage";
    case ErrorCode::kDegenerateD: return "DegenerateD";
    case ErrorCode::kRecoveryFailed: return "RecoveryFailed";
    case ErrorCode::kTagMismatch: return "TagMismatch";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kConnectionClosed: return "ConnectionClosed";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kDigestMismatch: return "DigestMismatch";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

Rng::Rng(std::optional<std::uint64_t> seed) {
  if (seed) engine_.emplace(*seed);
}

std::uint64_t Rng::next_u64() {
  if (engine_) return (*engine_)();
  std::array<unsigned char, 8> buf{};
  if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) {
    throw Error(ErrorCode::kIoError, "system random source failed");
  }
  std::uint64_t v = 0;
  for (unsigned char b : buf) v = (v << 8) | b;
  return v;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kPreconditionViolation, "uniform_below(0)");
  if (bound == 1) return 0;
  const int bits = std::bit_width(bound - 1);
  const std::uint64_t mask = bits == 64 ? ~0ULL : ((1ULL << bits) - 1);
  for (;;) {
    const std::uint64_t v = next_u64() & mask;
    if (v < bound) return v;
  }
}

BigInt Rng::uniform_below(const BigInt& bound) {
  if (bound <= 0) throw Error(ErrorCode::kPreconditionViolation, "uniform_below(<=0)");
  if (bound == 1) return 0;
  const BigInt top = bound - 1;
  const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  for (;;) {
    BigInt v = 0;
    for (std::size_t i = 0; i < words; ++i) {
      v <<= 64;
      const std::uint64_t w = next_u64();
      v += BigInt(static_cast<unsigned long>(w >> 32)) << 32;
      v += static_cast<unsigned long>(w & 0xffffffffULL);
    }
    // Keep exactly `bits` low bits, then reject values past the bound.
    BigInt mask = (BigInt(1) << bits) - 1;
    v &= mask;
    if (v < bound) return v;
  }
}

BigInt Rng::uniform_range(const BigInt& lo, const BigInt& hi) {
  if (hi < lo) throw Error(ErrorCode::kPreconditionViolation, "uniform_range: hi < lo");
  return lo + uniform_below(BigInt(hi - lo + 1));
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t w = next_u64();
    for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
      out[i] = static_cast<std::uint8_t>(w >> 56);
      w <<= 8;
    }
  }
}

Rng Rng::fork() { return Rng::seeded(next_u64()); }

}  // namespace ot12
