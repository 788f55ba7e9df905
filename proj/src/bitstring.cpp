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

#include "ot12/bitstring.hpp"

#include "ot12/error.hpp"
#include "ot12/field.hpp"

namespace ot12 {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitString::BitString(std::size_t bits) : bytes_((bits + 7) / 8, 0), bits_(bits) {}

void BitString::clear_padding() {
  const std::size_t spare = bytes_.size() * 8 - bits_;
  if (spare > 0) bytes_.back() &= static_cast<std::uint8_t>(0xffU << spare);
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits) {
  BitString out(bits);
  if (bytes.size() * 8 < bits) {
    throw Error(ErrorCode::kLengthMismatch, "not enough bytes for " + std::to_string(bits) + " bits");
  }
  std::copy_n(bytes.begin(), out.bytes_.size(), out.bytes_.begin());
  out.clear_padding();
  return out;
}

BitString BitString::from_hex(std::string_view hex) {
  BitString out(hex.size() * 4);
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const int v = hex_value(hex[i]);
    if (v < 0) throw PositionedError(ErrorCode::kParseError, i, "invalid hex digit");
    out.bytes_[i / 2] |= static_cast<std::uint8_t>(i % 2 == 0 ? v << 4 : v);
  }
  return out;
}

BitString BitString::from_binary(std::string_view bits) {
  BitString out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      out.bytes_[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
    } else if (bits[i] != '0') {
      throw PositionedError(ErrorCode::kParseError, i, "invalid binary digit");
    }
  }
  return out;
}

BitString BitString::from_integer(const BigInt& v, std::size_t bits) {
  if (v < 0 || ot12::bit_length(v) > bits) {
    throw Error(ErrorCode::kOutOfRange, "integer does not fit in " + std::to_string(bits) + " bits");
  }
  BitString out(bits);
  const std::size_t spare = out.bytes_.size() * 8 - bits;
  out.bytes_ = bigint_to_bytes(BigInt(v << spare), out.bytes_.size());
  return out;
}

BitString BitString::random(std::size_t bits, Rng& rng) {
  BitString out(bits);
  rng.fill(out.bytes_);
  out.clear_padding();
  return out;
}

bool BitString::bit(std::size_t i) const {
  if (i >= bits_) throw Error(ErrorCode::kOutOfRange, "bit index past end");
  return (bytes_[i / 8] & (0x80U >> (i % 8))) != 0;
}

BitString BitString::with_flipped_bit(std::size_t i) const {
  if (i >= bits_) throw Error(ErrorCode::kOutOfRange, "bit index past end");
  BitString out = *this;
  out.bytes_[i / 8] ^= static_cast<std::uint8_t>(0x80U >> (i % 8));
  return out;
}

BigInt BitString::to_integer() const {
  const std::size_t spare = bytes_.size() * 8 - bits_;
  return BigInt(bytes_to_bigint(bytes_) >> spare);
}

std::string BitString::to_hex() const {
  std::string full = ot12::to_hex(bytes_);
  // Drop a trailing pad nibble when the length is a multiple of 4.
  const std::size_t digits = (bits_ + 3) / 4;
  full.resize(digits);
  return full;
}

BitString xor_mask(const BitString& x, const BitString& y) {
  if (x.bit_length() != y.bit_length()) {
    throw Error(ErrorCode::kLengthMismatch, "xor of " + std::to_string(x.bit_length()) +
                                                " and " + std::to_string(y.bit_length()) + " bits");
  }
  std::vector<std::uint8_t> out(x.byte_length());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.bytes()[i] ^ y.bytes()[i];
  return BitString::from_bytes(out, x.bit_length());
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

}  // namespace ot12
