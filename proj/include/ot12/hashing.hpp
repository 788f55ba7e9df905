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
#include <span>
#include <string>
#include <vector>

#include "ot12/bitstring.hpp"
#include "ot12/field.hpp"
#include "ot12/random.hpp"

namespace ot12 {

inline constexpr std::size_t kSha256Bits = 256;
inline constexpr const char* kDefaultH1Tag = "OT12.h1.v1";

// h1 : F_p -> {0,1}^q, SHA-256 over (domain_tag || element encoding),
// truncated to the leading q bits.
struct H1Spec {
  std::string algorithm = "sha256";
  std::size_t q = 128;
  std::string domain_tag = kDefaultH1Tag;

  friend bool operator==(const H1Spec&, const H1Spec&) = default;
};

enum class H2Variant : std::uint8_t { kDiscreteExp, kToyIdentity };

// h2 : {0,1}^q -> {0,1}^q'.
//
// kDiscreteExp maps m to G^(M+1) mod P, M the integer value of m. Since
// 2^q < P - 1 the exponents 1..2^q are distinct modulo the group order, so
// the map is injective. kToyIdentity returns m unchanged and only exists for
// tests that should not depend on h2.
struct H2Spec {
  H2Variant variant = H2Variant::kDiscreteExp;
  std::size_t q = 128;
  // kDiscreteExp only.
  FieldParams field;
  BigInt generator;
  std::size_t qprime = 0;

  friend bool operator==(const H2Spec&, const H2Spec&) = default;
};

std::string_view to_string(H2Variant v);
H2Variant h2_variant_from_string(std::string_view s);

// Fresh discrete_exp parameters: a (q+2)-bit safe prime P and a generator G.
H2Spec make_discrete_exp_h2(std::size_t q, Rng& rng);
H2Spec make_discrete_exp_h2(std::size_t q, const FieldParams& field, const BigInt& generator);
H2Spec make_toy_identity_h2(std::size_t q);

// Human-readable invariant violations, empty when consistent.
std::vector<std::string> h1_spec_problems(const H1Spec& spec);
std::vector<std::string> h2_spec_problems(const H2Spec& spec);

BitString h1(const FieldElement& x, const H1Spec& spec, const FieldParams& fp);
// Throws kLengthMismatch when |m| != spec.q.
BitString h2(const BitString& m, const H2Spec& spec);

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

}  // namespace ot12
