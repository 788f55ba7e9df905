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

#include "ot12/hashing.hpp"

#include <openssl/evp.h>

#include "ot12/error.hpp"

namespace ot12 {

std::string_view to_string(H2Variant v) {
  switch (v) {
    case H2Variant::kDiscreteExp: return "discrete_exp";
    case H2Variant::kToyIdentity: return "toy_identity";
  }
  return "unknown";
}

H2Variant h2_variant_from_string(std::string_view s) {
  if (s == "discrete_exp") return H2Variant::kDiscreteExp;
  if (s == "toy_identity") return H2Variant::kToyIdentity;
  throw Error(ErrorCode::kParseError, "unknown h2 variant '" + std::string(s) + "'");
}

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.size()) {
    throw Error(ErrorCode::kIoError, "SHA-256 computation failed");
  }
  return out;
}

H2Spec make_discrete_exp_h2(std::size_t q, const FieldParams& field, const BigInt& generator) {
  H2Spec spec;
  spec.variant = H2Variant::kDiscreteExp;
  spec.q = q;
  spec.field = field;
  spec.generator = generator;
  spec.qprime = 8 * field.elem_width_bytes;
  return spec;
}

H2Spec make_discrete_exp_h2(std::size_t q, Rng& rng) {
  FieldParams field = generate_safe_prime(q + 2, rng);
  const FieldElement g = sample_generator(field, rng);
  return make_discrete_exp_h2(q, field, g.value);
}

H2Spec make_toy_identity_h2(std::size_t q) {
  H2Spec spec;
  spec.variant = H2Variant::kToyIdentity;
  spec.q = q;
  spec.qprime = q;
  return spec;
}

std::vector<std::string> h1_spec_problems(const H1Spec& spec) {
  std::vector<std::string> out;
  if (spec.algorithm != "sha256") out.push_back("unsupported h1 algorithm '" + spec.algorithm + "'");
  if (spec.q == 0 || spec.q > kSha256Bits) out.push_back("h1 output length must be in [1, 256]");
  if (spec.domain_tag.empty()) out.push_back("h1 domain tag is empty");
  return out;
}

std::vector<std::string> h2_spec_problems(const H2Spec& spec) {
  std::vector<std::string> out;
  if (spec.variant == H2Variant::kToyIdentity) {
    if (spec.qprime != spec.q) out.push_back("toy_identity requires q' = q");
    return out;
  }
  const BigInt& P = spec.field.p;
  if (!is_probable_prime(P)) {
    out.push_back("h2 modulus is not prime");
    return out;
  }
  if (bit_length(P) < spec.q + 2) out.push_back("h2 modulus needs at least q+2 bits");
  if (!(BigInt(1) << spec.q < P - 1)) out.push_back("h2 requires 2^q < P-1");
  try {
    const FieldParams rebuilt = make_field_params(P, spec.field.prime_factors_of_group_order);
    if (!is_generator(FieldElement(spec.generator), rebuilt)) {
      out.push_back("h2 base is not a generator mod P");
    }
  } catch (const Error& e) {
    out.push_back(std::string("h2 factorization invalid: ") + e.what());
  }
  if (spec.qprime != 8 * ((bit_length(P) + 7) / 8)) out.push_back("h2 q' must be 8*ceil(bitlen(P)/8)");
  return out;
}

BitString h1(const FieldElement& x, const H1Spec& spec, const FieldParams& fp) {
  std::vector<std::uint8_t> input(spec.domain_tag.begin(), spec.domain_tag.end());
  append_element(input, x, fp);
  const auto digest = sha256(input);
  return BitString::from_bytes(digest, spec.q);
}

BitString h2(const BitString& m, const H2Spec& spec) {
  if (m.bit_length() != spec.q) {
    throw Error(ErrorCode::kLengthMismatch, "h2 input has " + std::to_string(m.bit_length()) +
                                                " bits, expected " + std::to_string(spec.q));
  }
  if (spec.variant == H2Variant::kToyIdentity) return m;
  const BigInt exponent = m.to_integer() + 1;
  const FieldElement z = mod_pow(FieldElement(spec.generator), exponent, spec.field);
  return BitString::from_bytes(encode_element(z, spec.field), spec.qprime);
}

}  // namespace ot12
