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

#include "ot12/field.hpp"

#include <algorithm>
#include <numeric>

#include "ot12/error.hpp"

namespace ot12 {

namespace {

constexpr unsigned kTrialDivisionLimit = 1000;
constexpr int kMillerRabinRounds = 64;

const std::vector<unsigned>& small_primes() {
  static const std::vector<unsigned> primes = [] {
    std::vector<bool> composite(kTrialDivisionLimit + 1, false);
    std::vector<unsigned> out;
    for (unsigned i = 2; i <= kTrialDivisionLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned j = i * i; j <= kTrialDivisionLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

// One Miller-Rabin round: true if n survives base a.
bool witness_round(const BigInt& n, const BigInt& d, unsigned long s, const BigInt& a) {
  const BigInt n_minus_1 = n - 1;
  BigInt x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = (x * x) % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

std::uint64_t low_u64(const BigInt& v) {
  BigInt low = v & BigInt("0xffffffffffffffff");
  return mpz_get_ui(low.get_mpz_t());
}

}  // namespace

std::size_t bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

std::size_t FieldParams::bit_length() const { return ot12::bit_length(p); }

bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  for (unsigned sp : small_primes()) {
    if (n == sp) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), sp) != 0) return false;
  }
  if (n < BigInt(kTrialDivisionLimit) * kTrialDivisionLimit) return true;

  BigInt d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  // Fixed small-prime bases first, then bases drawn from a stream keyed on n.
  const auto& primes = small_primes();
  int rounds = 0;
  for (; rounds < 12; ++rounds) {
    if (!witness_round(n, d, s, BigInt(primes[rounds]))) return false;
  }
  Rng bases = Rng::seeded(low_u64(n) ^ 0x9e3779b97f4a7c15ULL);
  const BigInt hi = n - 2;
  for (; rounds < kMillerRabinRounds; ++rounds) {
    if (!witness_round(n, d, s, bases.uniform_range(2, hi))) return false;
  }
  return true;
}

bool is_safe_prime(const BigInt& p) {
  // u must be an odd prime so that p - 1 = 2u has two distinct factors.
  if (p < 7 || p % 2 == 0) return false;
  const BigInt u = (p - 1) / 2;
  // Cheap filter on u first: most candidates fail it.
  return is_probable_prime(u) && is_probable_prime(p);
}

std::optional<std::string> factorization_problem(const BigInt& p, const std::vector<BigInt>& factors) {
  std::vector<BigInt> sorted = factors;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return "factor list has duplicates";
  if (p < 3) return "modulus below 3";
  BigInt rest = p - 1;
  for (const BigInt& f : sorted) {
    if (f < 2 || !is_probable_prime(f) || rest % f != 0) {
      return "listed factor " + f.get_str() + " is not a prime factor of p-1";
    }
    while (rest % f == 0) rest /= f;
  }
  if (rest != 1) return "factors do not reconstruct p-1";
  return std::nullopt;
}

FieldParams make_field_params(const BigInt& p, std::vector<BigInt> factors) {
  if (!is_probable_prime(p)) {
    throw Error(ErrorCode::kPreconditionViolation, "modulus is not prime");
  }
  std::sort(factors.begin(), factors.end());
  factors.erase(std::unique(factors.begin(), factors.end()), factors.end());
  if (auto problem = factorization_problem(p, factors)) throw Error(ErrorCode::kPreconditionViolation, *problem);
  FieldParams fp;
  fp.p = p;
  fp.prime_factors_of_group_order = std::move(factors);
  if (is_safe_prime(p)) fp.cofactor_u = BigInt((p - 1) / 2);
  fp.elem_width_bytes = std::max<std::size_t>(1, (bit_length(p) + 7) / 8);
  return fp;
}

FieldParams make_field_params_unchecked(const BigInt& p, std::vector<BigInt> factors) {
  FieldParams fp;
  fp.p = p;
  fp.prime_factors_of_group_order = std::move(factors);
  if (is_safe_prime(p)) fp.cofactor_u = BigInt((p - 1) / 2);
  fp.elem_width_bytes = std::max<std::size_t>(1, (bit_length(p) + 7) / 8);
  return fp;
}

FieldParams make_safe_prime_params(const BigInt& p) {
  if (!is_safe_prime(p)) {
    throw Error(ErrorCode::kPreconditionViolation, p.get_str() + " is not a safe prime");
  }
  return make_field_params(p, {BigInt(2), BigInt((p - 1) / 2)});
}

std::size_t default_prime_budget(std::size_t bits) { return 10 * bits * bits; }

FieldParams generate_safe_prime(std::size_t bits, Rng& rng, std::optional<std::size_t> budget,
                                const BigInt& exclusive_floor) {
  if (bits < 3) {
    throw Error(ErrorCode::kPreconditionViolation, "safe primes need at least 3 bits");
  }
  const BigInt lo = std::max<BigInt>(BigInt(1) << (bits - 1), BigInt(exclusive_floor + 1));
  const BigInt hi = (BigInt(1) << bits) - 1;
  if (lo > hi) {
    throw Error(ErrorCode::kExhaustedAttempts,
                "no " + std::to_string(bits) + "-bit integer exceeds the floor");
  }

  // Small ranges are scanned completely so an empty range is reported exactly.
  if (bits <= 16) {
    std::vector<BigInt> found;
    for (BigInt c = lo; c <= hi; ++c) {
      if (is_safe_prime(c)) found.push_back(c);
    }
    if (found.empty()) {
      throw Error(ErrorCode::kExhaustedAttempts,
                  "no " + std::to_string(bits) + "-bit safe prime in range");
    }
    return make_safe_prime_params(found[rng.uniform_below(found.size())]);
  }

  const std::size_t attempts = budget.value_or(default_prime_budget(bits));
  for (std::size_t i = 0; i < attempts; ++i) {
    // Safe primes above 7 are 3 mod 4.
    BigInt c = rng.uniform_range(lo, hi);
    c += 3 - BigInt(c % 4);
    if (c > hi) c -= 4;
    if (c < lo) continue;
    if (is_safe_prime(c)) return make_safe_prime_params(c);
  }
  throw Error(ErrorCode::kExhaustedAttempts,
              "no safe prime found in " + std::to_string(attempts) + " candidates");
}

FieldElement reduce(const BigInt& v, const FieldParams& fp) {
  BigInt r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), fp.p.get_mpz_t());
  return FieldElement(std::move(r));
}

FieldElement mod_mul(const FieldElement& x, const FieldElement& y, const FieldParams& fp) {
  return reduce(BigInt(x.value * y.value), fp);
}

FieldElement mod_add(const FieldElement& x, const FieldElement& y, const FieldParams& fp) {
  return reduce(BigInt(x.value + y.value), fp);
}

FieldElement mod_neg(const FieldElement& x, const FieldParams& fp) {
  return reduce(BigInt(-x.value), fp);
}

FieldElement mod_pow(const FieldElement& base, const BigInt& exp, const FieldParams& fp) {
  if (exp < 0) throw Error(ErrorCode::kPreconditionViolation, "negative exponent");
  if (exp == 0) return FieldElement(1UL);
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.value.get_mpz_t(), exp.get_mpz_t(), fp.p.get_mpz_t());
  return FieldElement(std::move(r));
}

FieldElement mod_inv(const FieldElement& x, const FieldParams& fp) {
  BigInt r;
  if (x.value % fp.p == 0 ||
      mpz_invert(r.get_mpz_t(), x.value.get_mpz_t(), fp.p.get_mpz_t()) == 0) {
    throw Error(ErrorCode::kZeroInverse, "0 has no multiplicative inverse");
  }
  return FieldElement(std::move(r));
}

bool is_generator(const FieldElement& g, const FieldParams& fp) {
  if (g.value <= 0 || g.value >= fp.p) return false;
  const BigInt order = fp.group_order();
  for (const BigInt& f : fp.prime_factors_of_group_order) {
    if (mod_pow(g, BigInt(order / f), fp).value == 1) return false;
  }
  // p = 2: the trivial group is generated by 1.
  return fp.p == 2 || g.value != 1;
}

FieldElement sample_generator(const FieldParams& fp, Rng& rng, std::span<const FieldElement> exclude,
                              std::size_t budget) {
  const BigInt hi = fp.p - 1;
  for (std::size_t i = 0; i < budget; ++i) {
    FieldElement g(rng.uniform_range(1, hi));
    if (std::find(exclude.begin(), exclude.end(), g) != exclude.end()) continue;
    if (is_generator(g, fp)) return g;
  }
  throw Error(ErrorCode::kExhaustedAttempts, "generator rejection budget exceeded");
}

BigInt bytes_to_bigint(std::span<const std::uint8_t> bytes) {
  BigInt v;
  if (bytes.empty()) return v;
  mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return v;
}

std::vector<std::uint8_t> bigint_to_bytes(const BigInt& v, std::size_t width) {
  if (v < 0) throw Error(ErrorCode::kOutOfRange, "negative value has no byte encoding");
  const std::size_t needed = (bit_length(v) + 7) / 8;
  if (needed > width) {
    throw Error(ErrorCode::kOutOfRange, "value needs " + std::to_string(needed) +
                                            " bytes, width is " + std::to_string(width));
  }
  std::vector<std::uint8_t> out(width, 0);
  if (needed > 0) {
    std::size_t count = 0;
    mpz_export(out.data() + (width - needed), &count, 1, 1, 1, 0, v.get_mpz_t());
  }
  return out;
}

std::vector<std::uint8_t> encode_element(const FieldElement& x, const FieldParams& fp) {
  return bigint_to_bytes(x.value, fp.elem_width_bytes);
}

void append_element(std::vector<std::uint8_t>& out, const FieldElement& x, const FieldParams& fp) {
  const auto bytes = encode_element(x, fp);
  out.insert(out.end(), bytes.begin(), bytes.end());
}

FieldElement decode_element(std::span<const std::uint8_t> bytes, const FieldParams& fp) {
  if (bytes.size() != fp.elem_width_bytes) {
    throw Error(ErrorCode::kMalformedMessage, "field element has wrong width");
  }
  FieldElement x(bytes_to_bigint(bytes));
  if (x.value >= fp.p) throw Error(ErrorCode::kMalformedMessage, "field element not below p");
  return x;
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 1U);
  return Permutation(std::move(images));
}

Permutation Permutation::from_images(std::vector<std::uint32_t> images) {
  std::vector<bool> seen(images.size() + 1, false);
  for (std::uint32_t v : images) {
    if (v < 1 || v > images.size() || seen[v]) {
      throw Error(ErrorCode::kPreconditionViolation, "images do not form a bijection");
    }
    seen[v] = true;
  }
  return Permutation(std::move(images));
}

Permutation sample_permutation(std::size_t n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::kPreconditionViolation, "permutation size must be >= 1");
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 1U);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(images[i], images[rng.uniform_below(static_cast<std::uint64_t>(i + 1))]);
  }
  return Permutation::from_images(std::move(images));
}

}  // namespace ot12
