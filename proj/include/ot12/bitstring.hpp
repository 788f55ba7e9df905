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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ot12/random.hpp"

namespace ot12 {

// A string of exactly bit_length() bits, stored MSB-first and left-aligned in
// ceil(bits/8) bytes. Unused trailing bits of the last byte are always zero.
class BitString {
 public:
  BitString() = default;
  // All-zero string.
  explicit BitString(std::size_t bits);

  // Keeps the first `bits` bits of `bytes`; bytes must hold at least that many.
  static BitString from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits);
  // Hex digits, MSB first; bits = 4 * digits. Throws kParseError on bad digits.
  static BitString from_hex(std::string_view hex);
  // "1010" style.
  static BitString from_binary(std::string_view bits);
  // Integer v in [0, 2^bits) as a big-endian bit string.
  static BitString from_integer(const BigInt& v, std::size_t bits);
  static BitString random(std::size_t bits, Rng& rng);

  std::size_t bit_length() const noexcept { return bits_; }
  std::size_t byte_length() const noexcept { return bytes_.size(); }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

  bool bit(std::size_t i) const;
  BitString with_flipped_bit(std::size_t i) const;

  // The bits read as a big-endian unsigned integer.
  BigInt to_integer() const;
  std::string to_hex() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  void clear_padding();

  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

// Bitwise XOR. Throws kLengthMismatch when lengths differ.
BitString xor_mask(const BitString& x, const BitString& y);

std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace ot12
