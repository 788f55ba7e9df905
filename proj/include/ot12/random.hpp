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
#include <optional>
#include <random>
#include <span>

#include <gmpxx.h>

namespace ot12 {

using BigInt = mpz_class;

// Random source injected into every sampling operation.
//
// A seeded source is a deterministic mt19937_64 stream, used for replayable
// runs and tests. An unseeded source draws from the OpenSSL CSPRNG.
// Instances are not thread-safe; give each thread its own source.
class Rng {
 public:
  static Rng seeded(std::uint64_t seed) { return Rng(seed); }
  static Rng system() { return Rng(std::nullopt); }
  static Rng from_optional_seed(std::optional<std::uint64_t> seed) { return Rng(seed); }

  std::uint64_t next_u64();

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);
  BigInt uniform_below(const BigInt& bound);

  // Uniform integer in [lo, hi], inclusive.
  BigInt uniform_range(const BigInt& lo, const BigInt& hi);

  bool bit() { return (next_u64() & 1U) != 0; }
  void fill(std::span<std::uint8_t> out);

  // Derives an independent seeded child stream, e.g. one per worker thread.
  Rng fork();

  bool deterministic() const noexcept { return engine_.has_value(); }

 private:
  explicit Rng(std::optional<std::uint64_t> seed);

  std::optional<std::mt19937_64> engine_;
};

}  // namespace ot12
