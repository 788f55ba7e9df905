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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "ot12/random.hpp"

namespace ot12 {

// Prime field F_p together with what is needed to certify generators of F_p^x.
struct FieldParams {
  BigInt p;
  // Set when p = 2u + 1 with u prime.
  std::optional<BigInt> cofactor_u;
  // Distinct prime factors of p - 1.
  std::vector<BigInt> prime_factors_of_group_order;
  std::size_t elem_width_bytes = 1;

  BigInt group_order() const { return p - 1; }
  std::size_t bit_length() const;

  friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

// Why `factors` is not the distinct prime factorization of p - 1, if it is not.
std::optional<std::string> factorization_problem(const BigInt& p, const std::vector<BigInt>& factors);

// Builds FieldParams for a caller-supplied prime and factorization of p - 1.
// Throws kPreconditionViolation if p is not prime or the factors do not
// reconstruct p - 1.
FieldParams make_field_params(const BigInt& p, std::vector<BigInt> factors_of_p_minus_1);

// Same shape as make_field_params but without any checks; for loading data
// that is validated separately.
FieldParams make_field_params_unchecked(const BigInt& p, std::vector<BigInt> factors_of_p_minus_1);

// Convenience for safe primes: factors {2, (p-1)/2}.
FieldParams make_safe_prime_params(const BigInt& p);

// Element of F_p; value is always reduced into [0, p).
struct FieldElement {
  BigInt value;

  FieldElement() = default;
  explicit FieldElement(BigInt v) : value(std::move(v)) {}
  explicit FieldElement(unsigned long v) : value(v) {}

  bool is_zero() const { return value == 0; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.value == b.value; }
  friend bool operator<(const FieldElement& a, const FieldElement& b) { return a.value < b.value; }
};

FieldElement reduce(const BigInt& v, const FieldParams& fp);
FieldElement mod_mul(const FieldElement& x, const FieldElement& y, const FieldParams& fp);
FieldElement mod_add(const FieldElement& x, const FieldElement& y, const FieldParams& fp);
FieldElement mod_neg(const FieldElement& x, const FieldParams& fp);

// base^exp mod p, with 0^0 = 1.
FieldElement mod_pow(const FieldElement& base, const BigInt& exp, const FieldParams& fp);
// Throws kZeroInverse for x = 0.
FieldElement mod_inv(const FieldElement& x, const FieldParams& fp);

// Trial division by small primes followed by 64 Miller-Rabin rounds.
bool is_probable_prime(const BigInt& n);

// Is p a safe prime (p = 2u+1, both prime)?
bool is_safe_prime(const BigInt& p);

// Default candidate budget for safe-prime search: 10 * bits^2.
std::size_t default_prime_budget(std::size_t bits);

// Random safe prime with exactly `bits` bits, strictly greater than
// `exclusive_floor`. bits >= 3 or kPreconditionViolation; kExhaustedAttempts
// if the budget runs out or the range holds no safe prime.
FieldParams generate_safe_prime(std::size_t bits, Rng& rng,
                                std::optional<std::size_t> budget = std::nullopt,
                                const BigInt& exclusive_floor = 0);

// ord(g) == p - 1.
bool is_generator(const FieldElement& g, const FieldParams& fp);

// Rejection-samples a generator outside `exclude`.
FieldElement sample_generator(const FieldParams& fp, Rng& rng,
                              std::span<const FieldElement> exclude = {},
                              std::size_t budget = 100000);

// Fixed-width big-endian element encoding, width = fp.elem_width_bytes.
std::vector<std::uint8_t> encode_element(const FieldElement& x, const FieldParams& fp);
void append_element(std::vector<std::uint8_t>& out, const FieldElement& x, const FieldParams& fp);
// Throws kMalformedMessage on wrong width or a value >= p.
FieldElement decode_element(std::span<const std::uint8_t> bytes, const FieldParams& fp);

BigInt bytes_to_bigint(std::span<const std::uint8_t> bytes);
// Big-endian, left-padded to `width`; throws kOutOfRange if it does not fit.
std::vector<std::uint8_t> bigint_to_bytes(const BigInt& v, std::size_t width);
std::size_t bit_length(const BigInt& v);

// Bijection on {1, ..., n}.
class Permutation {
 public:
  static Permutation identity(std::size_t n);
  // images[j-1] = pi(j). Throws kPreconditionViolation if not a bijection.
  static Permutation from_images(std::vector<std::uint32_t> images);

  std::size_t size() const noexcept { return images_.size(); }
  // 1-based: pi(j) for j in [1, n].
  std::uint32_t operator()(std::size_t j) const { return images_.at(j - 1); }
  const std::vector<std::uint32_t>& images() const noexcept { return images_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {}
  std::vector<std::uint32_t> images_;
};

// Uniform permutation by Fisher-Yates. n >= 1.
Permutation sample_permutation(std::size_t n, Rng& rng);

}  // namespace ot12
