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

#include "ot12/protocol.hpp"

#include <algorithm>
#include <set>

#include "ot12/error.hpp"
#include "ot12/hashing.hpp"

namespace ot12 {

namespace {

void require_unit(const FieldElement& x, const FieldParams& fp, const char* what) {
  if (x.value <= 0 || x.value >= fp.p) {
    throw Error(ErrorCode::kMalformedMessage, std::string(what) + " is not a nonzero element of F_p");
  }
}

void require_units(const std::vector<FieldElement>& xs, std::size_t n, const FieldParams& fp,
                   const char* what) {
  if (xs.size() != n) {
    throw Error(ErrorCode::kMalformedMessage, std::string(what) + " has " + std::to_string(xs.size()) +
                                                  " entries, expected " + std::to_string(n));
  }
  for (const auto& x : xs) require_unit(x, fp, what);
}

void require_bits(const BitVector& bits, std::size_t n, const char* what) {
  if (bits.size() != n || std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b > 1; })) {
    throw Error(ErrorCode::kPreconditionViolation, std::string(what) + " must be " +
                                                       std::to_string(n) + " bits");
  }
}

// Values a with a + c_{i,j} = 0 for some (i, j).
std::set<BigInt> forbidden_offsets(const ProtocolParams& params) {
  std::set<BigInt> out;
  for (const auto& row : params.matrix) {
    for (const auto& c : row) out.insert(mod_neg(c, params.fp).value);
  }
  return out;
}

FieldElement sample_admissible(const ProtocolParams& params, const std::set<BigInt>& forbidden,
                               const std::optional<FieldElement>& other, Rng& rng) {
  const std::size_t taken = forbidden.size() + (other ? 1 : 0);
  if (params.fp.p <= taken) {
    throw Error(ErrorCode::kPreconditionViolation, "no admissible value left for a/b");
  }
  for (;;) {
    FieldElement x(rng.uniform_below(params.fp.p));
    if (forbidden.count(x.value) != 0) continue;
    if (other && x == *other) continue;
    return x;
  }
}

FieldElement product_over_column(const ProtocolParams& params, const FieldElement& y, std::size_t j,
                                 const BitVector& row_bits) {
  FieldElement acc(1UL);
  for (std::size_t i = 1; i <= params.n; ++i) {
    if (row_bits[i - 1] != 0) acc = mod_mul(acc, mod_add(y, params.c(i, j), params.fp), params.fp);
  }
  return acc;
}

FieldElement product_over_row(const ProtocolParams& params, const FieldElement& y, std::size_t i,
                              const BitVector& col_bits) {
  FieldElement acc(1UL);
  for (std::size_t j = 1; j <= params.n; ++j) {
    if (col_bits[j - 1] != 0) acc = mod_mul(acc, mod_add(y, params.c(i, j), params.fp), params.fp);
  }
  return acc;
}

FieldElement subset_product(const std::vector<FieldElement>& xs, const BitVector& bits,
                            const FieldParams& fp) {
  FieldElement acc(1UL);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (bits[k] != 0) acc = mod_mul(acc, xs[k], fp);
  }
  return acc;
}

IndexRange range_or_full(const std::optional<IndexRange>& range, std::size_t n) {
  return range.value_or(IndexRange::full(n));
}

}  // namespace

BitVector random_bits(std::size_t n, Rng& rng) {
  BitVector out(n);
  for (auto& b : out) b = rng.bit() ? 1 : 0;
  return out;
}

int round_of(const RoundMessage& msg) { return static_cast<int>(msg.index()) + 1; }

std::size_t blinding_exponent(const Permutation& perm, const BitVector& bits) {
  std::size_t sum = 0;
  for (std::size_t j = 1; j <= perm.size(); ++j) {
    if (bits.at(j - 1) != 0) sum += perm(j);
  }
  return sum;
}

FieldElement eval_f(const ProtocolParams& params, const BitVector& t, const BitVector& s,
                    const FieldElement& y) {
  require_bits(t, params.n, "t");
  require_bits(s, params.n, "s");
  FieldElement acc(1UL);
  for (std::size_t i = 1; i <= params.n; ++i) {
    for (std::size_t j = 1; j <= params.n; ++j) {
      if (t[i - 1] != 0 && s[j - 1] != 0) {
        acc = mod_mul(acc, mod_add(y, params.c(i, j), params.fp), params.fp);
      }
    }
  }
  return acc;
}

bool tau_identity_check(const ProtocolParams& params, const BitVector& t, const BitVector& s,
                        const FieldElement& d, const FieldElement& alpha_d,
                        const Permutation& sigma_d, const FieldElement& tau) {
  const BigInt k_prime(static_cast<unsigned long>(blinding_exponent(sigma_d, s)));
  return tau == mod_mul(mod_pow(alpha_d, k_prime, params.fp), eval_f(params, t, s, d), params.fp);
}

bool tau_b_identity_check(const ProtocolParams& params, const BitVector& t, const BitVector& s,
                          const FieldElement& d, const FieldElement& beta, const Permutation& rho,
                          const FieldElement& tau_b) {
  const BigInt r_prime(static_cast<unsigned long>(blinding_exponent(rho, t)));
  return tau_b == mod_mul(mod_pow(beta, r_prime, params.fp), eval_f(params, t, s, d), params.fp);
}

// --- Alice ---------------------------------------------------------------

AliceSession::AliceSession(ProtocolParams params, AliceSecrets secrets, IndexRange range)
    : params_(std::move(params)), secrets_(std::move(secrets)), range_(range) {
  check_invariants();
}

AliceSecrets sample_alice_secrets(const ProtocolParams& params, BitString m_a, BitString m_b, Rng& rng) {
  AliceSecrets out;
  out.t = random_bits(params.n, rng);
  const auto forbidden = forbidden_offsets(params);
  out.a = sample_admissible(params, forbidden, std::nullopt, rng);
  out.b = sample_admissible(params, forbidden, out.a, rng);
  out.alpha_a = sample_generator(params.fp, rng);
  const FieldElement exclude[] = {out.alpha_a};
  out.alpha_b = sample_generator(params.fp, rng, exclude);
  out.sigma_a = sample_permutation(params.n, rng);
  out.sigma_b = sample_permutation(params.n, rng);
  out.m_a = std::move(m_a);
  out.m_b = std::move(m_b);
  return out;
}

BobSecrets sample_bob_secrets(const ProtocolParams& params, Rng& rng) {
  BobSecrets out;
  out.s = random_bits(params.n, rng);
  out.beta = sample_generator(params.fp, rng);
  out.rho = sample_permutation(params.n, rng);
  return out;
}

AliceSession::AliceSession(ProtocolParams params, BitString m_a, BitString m_b, Rng& rng,
                           std::optional<IndexRange> range)
    : params_(std::move(params)), range_(range_or_full(range, params_.n)) {
  secrets_ = sample_alice_secrets(params_, std::move(m_a), std::move(m_b), rng);
  check_invariants();
}

AliceSession AliceSession::from_secrets(ProtocolParams params, AliceSecrets secrets,
                                        std::optional<IndexRange> range) {
  const IndexRange r = range_or_full(range, params.n);
  return AliceSession(std::move(params), std::move(secrets), r);
}

void AliceSession::check_invariants() const {
  const std::size_t n = params_.n;
  const FieldParams& fp = params_.fp;
  const AliceSecrets& s = secrets_;
  require_bits(s.t, n, "t");
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kPreconditionViolation, what); };
  if (s.a.value >= fp.p || s.b.value >= fp.p || s.a.value < 0 || s.b.value < 0) fail("a, b must lie in F_p");
  if (s.a == s.b) fail("a and b must differ");
  const auto forbidden = forbidden_offsets(params_);
  if (forbidden.count(s.a.value) != 0 || forbidden.count(s.b.value) != 0) {
    fail("a + c_{i,j} and b + c_{i,j} must be nonzero");
  }
  if (s.alpha_a == s.alpha_b) fail("alpha_a and alpha_b must differ");
  if (!is_generator(s.alpha_a, fp) || !is_generator(s.alpha_b, fp)) fail("alpha_a, alpha_b must generate F_p^x");
  if (s.sigma_a.size() != n || s.sigma_b.size() != n) fail("permutations must act on {1..n}");
  if (s.m_a.bit_length() != params_.q || s.m_b.bit_length() != params_.q) {
    throw Error(ErrorCode::kLengthMismatch, "messages must be exactly q bits");
  }
}

Round1Message AliceSession::round1() {
  if (stage_ != Stage::kNew) throw Error(ErrorCode::kInvalidStage, "round 1 requires a new session");
  const FieldParams& fp = params_.fp;
  Round1Message out;
  for (std::size_t j = 1; j <= params_.n; ++j) {
    const BigInt ea(static_cast<unsigned long>(secrets_.sigma_a(j)));
    const BigInt eb(static_cast<unsigned long>(secrets_.sigma_b(j)));
    out.mu_a.push_back(mod_mul(mod_pow(secrets_.alpha_a, ea, fp),
                               product_over_column(params_, secrets_.a, j, secrets_.t), fp));
    out.mu_b.push_back(mod_mul(mod_pow(secrets_.alpha_b, eb, fp),
                               product_over_column(params_, secrets_.b, j, secrets_.t), fp));
  }
  stage_ = Stage::kSentR1;
  return out;
}

Round3Message AliceSession::round3(const Round2Message& r2) {
  if (stage_ != Stage::kSentR1) throw Error(ErrorCode::kInvalidStage, "round 3 requires round 1 sent");
  const FieldParams& fp = params_.fp;
  require_unit(r2.tau_a, fp, "tau_A,a");
  require_unit(r2.tau_b, fp, "tau_A,b");

  Round3Message out;
  CostCounters cost = counters_;
  auto masks = [&](const FieldElement& alpha, const FieldElement& tau, const BitString& m) {
    std::vector<BitString> list;
    list.reserve(range_.count());
    const FieldElement alpha_inv = mod_inv(alpha, fp);
    FieldElement x = mod_mul(mod_pow(alpha_inv, BigInt(static_cast<unsigned long>(range_.first)), fp), tau, fp);
    for (std::size_t k = range_.first; k <= range_.last; ++k) {
      list.push_back(xor_mask(h1(x, params_.h1, fp), m));
      ++cost.h1_calls;
      x = mod_mul(x, alpha_inv, fp);
    }
    return list;
  };
  out.masked_a = masks(secrets_.alpha_a, r2.tau_a, secrets_.m_a);
  out.masked_b = masks(secrets_.alpha_b, r2.tau_b, secrets_.m_b);
  out.a = secrets_.a;
  out.b = secrets_.b;
  out.z_a = h2(secrets_.m_a, params_.h2);
  out.z_b = h2(secrets_.m_b, params_.h2);
  cost.h2_calls += 2;

  counters_ = cost;
  stage_ = Stage::kSentR3;
  return out;
}

Round5Message AliceSession::round5(const Round4Message& r4) {
  if (stage_ != Stage::kSentR3) throw Error(ErrorCode::kInvalidStage, "round 5 requires round 3 sent");
  require_units(r4.nu, params_.n, params_.fp, "nu");
  Round5Message out{subset_product(r4.nu, secrets_.t, params_.fp)};
  stage_ = Stage::kSentR5;
  return out;
}

// --- Bob -----------------------------------------------------------------

BobSession::BobSession(ProtocolParams params, BobSecrets secrets, IndexRange range)
    : params_(std::move(params)), secrets_(std::move(secrets)), range_(range) {
  require_bits(secrets_.s, params_.n, "s");
  if (!is_generator(secrets_.beta, params_.fp)) {
    throw Error(ErrorCode::kPreconditionViolation, "beta must generate F_p^x");
  }
  if (secrets_.rho.size() != params_.n) {
    throw Error(ErrorCode::kPreconditionViolation, "rho must act on {1..n}");
  }
}

BobSession::BobSession(ProtocolParams params, Rng& rng, std::optional<IndexRange> range)
    : params_(std::move(params)), secrets_(sample_bob_secrets(params_, rng)),
      range_(range_or_full(range, params_.n)) {}

BobSession BobSession::from_secrets(ProtocolParams params, BobSecrets secrets,
                                    std::optional<IndexRange> range) {
  const IndexRange r = range_or_full(range, params.n);
  return BobSession(std::move(params), std::move(secrets), r);
}

const BitString& BobSession::chosen_commitment() const {
  if (!r3_ || !choice_) throw Error(ErrorCode::kInvalidStage, "no commitment before round 4");
  return *choice_ == Side::kA ? r3_->z_a : r3_->z_b;
}

Round2Message BobSession::round2(const Round1Message& r1) {
  if (stage_ != Stage::kNew) throw Error(ErrorCode::kInvalidStage, "round 2 requires a new session");
  require_units(r1.mu_a, params_.n, params_.fp, "mu_a");
  require_units(r1.mu_b, params_.n, params_.fp, "mu_b");
  Round2Message out{subset_product(r1.mu_a, secrets_.s, params_.fp),
                    subset_product(r1.mu_b, secrets_.s, params_.fp)};
  stage_ = Stage::kSentR2;
  return out;
}

Round4Message BobSession::round4(const Round3Message& r3, Side choice) {
  if (stage_ != Stage::kSentR2) throw Error(ErrorCode::kInvalidStage, "round 4 requires round 2 sent");
  const FieldParams& fp = params_.fp;
  auto check_list = [&](const std::vector<BitString>& list, const char* what) {
    if (list.size() != range_.count()) {
      throw Error(ErrorCode::kMalformedMessage, std::string(what) + " has " + std::to_string(list.size()) +
                                                    " entries, expected " + std::to_string(range_.count()));
    }
    for (const auto& s : list) {
      if (s.bit_length() != params_.q) throw Error(ErrorCode::kMalformedMessage, std::string(what) + " entry is not q bits");
    }
  };
  check_list(r3.masked_a, "masked_a");
  check_list(r3.masked_b, "masked_b");
  if (r3.a.value < 0 || r3.a.value >= fp.p || r3.b.value < 0 || r3.b.value >= fp.p) {
    throw Error(ErrorCode::kMalformedMessage, "a, b must lie in F_p");
  }
  if (r3.a == r3.b) throw Error(ErrorCode::kMalformedMessage, "a and b must differ");
  if (r3.z_a.bit_length() != params_.h2.qprime || r3.z_b.bit_length() != params_.h2.qprime) {
    throw Error(ErrorCode::kMalformedMessage, "commitments must be q' bits");
  }

  const FieldElement& d = choice == Side::kA ? r3.a : r3.b;
  Round4Message out;
  for (std::size_t i = 1; i <= params_.n; ++i) {
    const FieldElement blocked = product_over_row(params_, d, i, BitVector(params_.n, 1));
    if (blocked.is_zero()) {
      throw Error(ErrorCode::kDegenerateD, "d + c_{i,j} = 0 in row " + std::to_string(i));
    }
    const BigInt e(static_cast<unsigned long>(secrets_.rho(i)));
    out.nu.push_back(mod_mul(mod_pow(secrets_.beta, e, fp), product_over_row(params_, d, i, secrets_.s), fp));
  }
  r3_ = r3;
  choice_ = choice;
  stage_ = Stage::kSentR4;
  return out;
}

BitString BobSession::recover(const Round5Message& r5) {
  if (stage_ != Stage::kSentR4) throw Error(ErrorCode::kInvalidStage, "recovery requires round 4 sent");
  const FieldParams& fp = params_.fp;
  require_unit(r5.tau_b, fp, "tau_B");

  const auto& masked = *choice_ == Side::kA ? r3_->masked_a : r3_->masked_b;
  const BitString& z = chosen_commitment();
  const FieldElement beta_inv = mod_inv(secrets_.beta, fp);
  FieldElement x = mod_mul(mod_pow(beta_inv, BigInt(static_cast<unsigned long>(range_.first)), fp), r5.tau_b, fp);
  for (std::size_t r = range_.first; r <= range_.last; ++r) {
    const BitString key = h1(x, params_.h1, fp);
    ++counters_.h1_calls;
    for (const BitString& s : masked) {
      const BitString candidate = xor_mask(key, s);
      ++counters_.h2_calls;
      if (h2(candidate, params_.h2) == z) {
        stage_ = Stage::kRecovered;
        return candidate;
      }
    }
    x = mod_mul(x, beta_inv, fp);
  }
  throw Error(ErrorCode::kRecoveryFailed, "no (r, k) pair reproduces z_d");
}

RunResult execute(AliceSession& alice, BobSession& bob, Side choice) {
  RunResult out;
  Transcript& t = out.transcript;
  t.choice = choice;
  t.r1 = alice.round1();
  t.r2 = bob.round2(t.r1);
  t.r3 = alice.round3(t.r2);
  t.r4 = bob.round4(t.r3, choice);
  t.r5 = alice.round5(t.r4);
  out.recovered = bob.recover(t.r5);
  return out;
}

}  // namespace ot12
