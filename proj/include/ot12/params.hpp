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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ot12/field.hpp"
#include "ot12/hashing.hpp"
#include "ot12/random.hpp"

namespace ot12 {

inline constexpr int kParamsFormatVersion = 1;
inline constexpr std::size_t kDefaultQ = 128;
inline constexpr std::size_t kMinQ = 8;

// Public setup both parties agree on before the first round.
struct ProtocolParams {
  std::size_t n = 0;
  FieldParams fp;
  // matrix[i-1][j-1] = c_{i,j}.
  std::vector<std::vector<FieldElement>> matrix;
  std::size_t q = kDefaultQ;
  H1Spec h1;
  H2Spec h2;

  const FieldElement& c(std::size_t i, std::size_t j) const { return matrix.at(i - 1).at(j - 1); }

  friend bool operator==(const ProtocolParams&, const ProtocolParams&) = default;
};

struct SetupOptions {
  std::optional<BigInt> p;
  // Required with an explicit p that is not a safe prime.
  std::optional<std::vector<BigInt>> p_factors;
  std::optional<std::size_t> q;
  H2Variant h2_variant = H2Variant::kDiscreteExp;
  // Analysis experiments deliberately run below the p > n^2 + 2 floor.
  bool enforce_prime_floor = true;
};

// max(ceil(sqrt(n log2 n)), ceil(log2(n^2 + 3)), 3).
std::size_t prime_bit_length_for(std::size_t n);

// Smallest admissible prime is strictly above this value: n^2 + 2.
BigInt prime_floor_for(std::size_t n);

// Generates fresh public parameters. Throws kPreconditionViolation for n < 2,
// kInvalidOverride for overrides violating the invariants, and propagates
// kExhaustedAttempts from prime generation.
ProtocolParams setup(std::size_t n, Rng& rng, const SetupOptions& options = {});

enum class ViolationKind : std::uint8_t {
  kNTooSmall,
  kShapeMismatch,
  kEntryOutOfRange,
  kPrimalityFailure,
  kFactorizationMismatch,
  kWidthMismatch,
  kPrimeTooSmall,
  kQOutOfRange,
  kH1SpecInvalid,
  kH2SpecInvalid,
  kToyHashNotAllowed,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidateOptions {
  bool allow_toy_h2 = false;
  bool enforce_prime_floor = true;
};

// Checks every ProtocolParams invariant and reports all violations.
std::vector<Violation> validate(const ProtocolParams& params, const ValidateOptions& options = {});
std::vector<ViolationKind> violation_kinds(const std::vector<Violation>& violations);

// Canonical JSON document (UTF-8) with integers as decimal strings.
std::string save_params(const ProtocolParams& params);
// Throws PositionedError(kParseError) on malformed input. Does not validate.
ProtocolParams load_params(std::string_view text);

ProtocolParams read_params_file(const std::string& path);
void write_params_file(const std::string& path, const ProtocolParams& params);

// First 8 bytes of SHA-256 over the canonical serialization.
std::array<std::uint8_t, 8> params_digest(const ProtocolParams& params);

}  // namespace ot12
