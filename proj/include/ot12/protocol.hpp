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
#include <variant>
#include <vector>

#include "ot12/bitstring.hpp"
#include "ot12/field.hpp"
#include "ot12/params.hpp"
#include "ot12/random.hpp"

namespace ot12 {

// One bit per entry, each 0 or 1.
using BitVector = std::vector<std::uint8_t>;

BitVector random_bits(std::size_t n, Rng& rng);

enum class Side : std::uint8_t { kA, kB };

// Inclusive range of blinding exponents that Alice masks and Bob searches.
//
// The blinding exponent sum_j sigma(j) s_j can be anything in
// [0, n(n+1)/2], so full() is what the protocol uses. narrow() is the
// shorter range [1, n(n-1)/2]; it misses valid transcripts and is kept only
// to demonstrate that.
struct IndexRange {
  std::size_t first = 0;
  std::size_t last = 0;

  static IndexRange full(std::size_t n) { return {0, n * (n + 1) / 2}; }
  static IndexRange narrow(std::size_t n) { return {1, n * (n - 1) / 2}; }

  std::size_t count() const { return last >= first ? last - first + 1 : 0; }
  bool contains(std::size_t k) const { return k >= first && k <= last; }

  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// K = n(n+1)/2 + 1, the number of masked strings per side.
inline std::size_t mask_count(std::size_t n) { return IndexRange::full(n).count(); }

struct Round1Message {
  std::vector<FieldElement> mu_a;
  std::vector<FieldElement> mu_b;
  friend bool operator==(const Round1Message&, const Round1Message&) = default;
};

struct Round2Message {
  FieldElement tau_a;
  FieldElement tau_b;
  friend bool operator==(const Round2Message&, const Round2Message&) = default;
};

struct Round3Message {
  std::vector<BitString> masked_a;
  std::vector<BitString> masked_b;
  FieldElement a;
  FieldElement b;
  BitString z_a;
  BitString z_b;
  friend bool operator==(const Round3Message&, const Round3Message&) = default;
};

struct Round4Message {
  std::vector<FieldElement> nu;
  friend bool operator==(const Round4Message&, const Round4Message&) = default;
};

struct Round5Message {
  FieldElement tau_b;
  friend bool operator==(const Round5Message&, const Round5Message&) = default;
};

using RoundMessage =
    std::variant<Round1Message, Round2Message, Round3Message, Round4Message, Round5Message>;

// 1..5 for the round a message belongs to.
int round_of(const RoundMessage& msg);

struct CostCounters {
  std::uint64_t h1_calls = 0;
  std::uint64_t h2_calls = 0;
};

struct AliceSecrets {
  BitVector t;
  FieldElement a;
  FieldElement b;
  FieldElement alpha_a;
  FieldElement alpha_b;
  Permutation sigma_a = Permutation::identity(1);
  Permutation sigma_b = Permutation::identity(1);
  BitString m_a;
  BitString m_b;
};

struct BobSecrets {
  BitVector s;
  FieldElement beta;
  Permutation rho = Permutation::identity(1);
};

// Samples Alice's secrets under the session invariants: t, distinct a and b
// avoiding every -c_{i,j}, distinct generators, two permutations.
AliceSecrets sample_alice_secrets(const ProtocolParams& params, BitString m_a, BitString m_b, Rng& rng);
BobSecrets sample_bob_secrets(const ProtocolParams& params, Rng& rng);

// Sender. Secrets are fixed at construction; each round is a deterministic
// function of the session and the incoming message. A failed call leaves the
// session untouched.
class AliceSession {
 public:
  enum class Stage : std::uint8_t { kNew, kSentR1, kSentR3, kSentR5 };

  // Samples t, a, b, the two generators and the two permutations.
  AliceSession(ProtocolParams params, BitString m_a, BitString m_b, Rng& rng,
               std::optional<IndexRange> range = std::nullopt);
  // Throws kPreconditionViolation if the secrets break a session invariant.
  static AliceSession from_secrets(ProtocolParams params, AliceSecrets secrets,
                                   std::optional<IndexRange> range = std::nullopt);

  Round1Message round1();
  Round3Message round3(const Round2Message& r2);
  Round5Message round5(const Round4Message& r4);

  Stage stage() const noexcept { return stage_; }
  const CostCounters& counters() const noexcept { return counters_; }
  const ProtocolParams& params() const noexcept { return params_; }
  const IndexRange& range() const noexcept { return range_; }

#ifdef OT12_WHITEBOX
  const AliceSecrets& secrets() const noexcept { return secrets_; }
#endif

 private:
  AliceSession(ProtocolParams params, AliceSecrets secrets, IndexRange range);
  void check_invariants() const;

  ProtocolParams params_;
  AliceSecrets secrets_;
  IndexRange range_;
  Stage stage_ = Stage::kNew;
  CostCounters counters_;
};

// Receiver.
class BobSession {
 public:
  enum class Stage : std::uint8_t { kNew, kSentR2, kSentR4, kRecovered };

  // Samples s, beta and rho.
  BobSession(ProtocolParams params, Rng& rng, std::optional<IndexRange> range = std::nullopt);
  static BobSession from_secrets(ProtocolParams params, BobSecrets secrets,
                                 std::optional<IndexRange> range = std::nullopt);

  Round2Message round2(const Round1Message& r1);
  Round4Message round4(const Round3Message& r3, Side choice);
  // Searches r (outer) and k (inner) over the index range for
  // h2(h1(beta^-r tau_B) xor masked_k) == z_d. Throws kRecoveryFailed.
  BitString recover(const Round5Message& r5);

  Stage stage() const noexcept { return stage_; }
  const CostCounters& counters() const noexcept { return counters_; }
  const ProtocolParams& params() const noexcept { return params_; }
  std::optional<Side> choice() const noexcept { return choice_; }
  // Commitment z_d for the chosen side, available after round 4.
  const BitString& chosen_commitment() const;

#ifdef OT12_WHITEBOX
  const BobSecrets& secrets() const noexcept { return secrets_; }
#endif

 private:
  BobSession(ProtocolParams params, BobSecrets secrets, IndexRange range);

  ProtocolParams params_;
  BobSecrets secrets_;
  IndexRange range_;
  Stage stage_ = Stage::kNew;
  CostCounters counters_;
  std::optional<Side> choice_;
  std::optional<Round3Message> r3_;
};

// Every message of one run, plus the receiver's choice.
struct Transcript {
  Round1Message r1;
  Round2Message r2;
  Round3Message r3;
  Round4Message r4;
  Round5Message r5;
  Side choice = Side::kA;
};

struct RunResult {
  Transcript transcript;
  BitString recovered;
};

// Drives both sessions through all five rounds and recovery, in memory.
RunResult execute(AliceSession& alice, BobSession& bob, Side choice);

// f(y) = prod over (i, j) with t_i = s_j = 1 of (y + c_{i,j}); empty product 1.
FieldElement eval_f(const ProtocolParams& params, const BitVector& t, const BitVector& s,
                    const FieldElement& y);

// sum_j perm(j) * bits_j.
std::size_t blinding_exponent(const Permutation& perm, const BitVector& bits);

// tau == alpha_d^k' f(d), k' = sum_j sigma_d(j) s_j.
bool tau_identity_check(const ProtocolParams& params, const BitVector& t, const BitVector& s,
                        const FieldElement& d, const FieldElement& alpha_d,
                        const Permutation& sigma_d, const FieldElement& tau);

// tau_B == beta^r' f(d), r' = sum_i rho(i) t_i.
bool tau_b_identity_check(const ProtocolParams& params, const BitVector& t, const BitVector& s,
                          const FieldElement& d, const FieldElement& beta, const Permutation& rho,
                          const FieldElement& tau_b);

}  // namespace ot12
