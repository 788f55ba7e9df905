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
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ot12/field.hpp"
#include "ot12/protocol.hpp"
#include "ot12/random.hpp"

namespace ot12 {

// Desk-scale cryptanalysis: discrete logs in small F_p^x, the subset-sum
// congruence on Bob's side, and the permuted subset-sum challenge.

enum class DlogMethod : std::uint8_t { kExhaustive, kBabyStepGiantStep };

inline constexpr unsigned kMaxExhaustiveBits = 32;
inline constexpr unsigned kMaxBsgsBits = 40;

// Discrete logarithm to base g in F_p^x. BSGS precomputes its baby-step table
// once in the constructor. Throws kOutOfRange if p exceeds the method budget
// and kPreconditionViolation if g is not a generator.
class DlogOracle {
 public:
  DlogOracle(FieldParams fp, FieldElement g, DlogMethod method);

  // e in [0, p-2] with g^e = y. y must be nonzero.
  std::uint64_t log(const FieldElement& y) const;

  const FieldParams& field() const noexcept { return fp_; }
  const FieldElement& generator() const noexcept { return g_; }
  DlogMethod method() const noexcept { return method_; }
  std::uint64_t group_order() const noexcept { return p_ - 1; }

 private:
  std::uint64_t exhaustive(std::uint64_t y) const;
  std::uint64_t bsgs(std::uint64_t y) const;

  FieldParams fp_;
  FieldElement g_;
  DlogMethod method_;
  std::uint64_t p_ = 0;
  std::uint64_t g64_ = 0;
  std::uint64_t steps_ = 0;
  std::uint64_t giant_ = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> baby_;
};

// sum_i x_i * coeffs_i == target (mod modulus), x in {0,1}^n.
struct SubsetCongruence {
  std::vector<std::uint64_t> coeffs;
  std::uint64_t target = 0;
  std::uint64_t modulus = 1;
};

inline constexpr std::size_t kMaxCongruenceBits = 24;

// coeffs_i = log(nu_i), target = log(tau_B).
SubsetCongruence build_subset_congruence(const Transcript& transcript, const DlogOracle& oracle);

bool satisfies(const SubsetCongruence& inst, const BitVector& x);

// Every solution, ordered by the integer whose bit i-1 is x_i. kBudgetExceeded for n > 24.
std::vector<BitVector> enumerate_congruence_solutions(const SubsetCongruence& inst);
std::uint64_t count_congruence_solutions(const SubsetCongruence& inst);

struct DensityTrial {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::uint64_t p = 0;
  std::uint64_t measured_count = 0;
  // The sender's real t was among the solutions.
  bool planted_found = false;
};

struct DensityReport {
  std::vector<DensityTrial> trials;
  double mean_count = 0;
  // 2^(n - log2 p) = 2^n / p.
  double predicted = 0;
};

struct DensityOptions {
  std::size_t n = 8;
  std::uint64_t p = 31;
  std::size_t trials = 50;
  // 0 picks the hardware concurrency.
  std::size_t threads = 0;
};

// Runs fresh protocol transcripts over F_p (p prime, p - 1 factored by trial
// division) and counts the solutions of each resulting congruence. Per-trial
// seeds are drawn up front, so the report does not depend on thread count.
// kBudgetExceeded for n > 16.
DensityReport solution_density_experiment(const DensityOptions& options, Rng& rng);

void write_density_csv(std::ostream& out, const DensityReport& report);
void write_density_summary(std::ostream& out, const DensityReport& report);

// sum_j x_j e_{i,j} + pi(i) == f_i (mod modulus) for every row i.
struct Challenge1Instance {
  std::size_t n = 0;
  std::uint64_t modulus = 1;
  std::vector<std::vector<std::uint64_t>> e;
  std::vector<std::uint64_t> f;
};

struct Challenge1Solution {
  BitVector x;
  Permutation pi = Permutation::identity(1);
};

inline constexpr std::size_t kMaxChallenge1N = 8;

bool satisfies(const Challenge1Instance& inst, const BitVector& x, const Permutation& pi);

// Brute force over x (outer) and permutations in lexicographic order (inner).
// kBudgetExceeded for n > 8.
std::optional<Challenge1Solution> challenge1_search(const Challenge1Instance& inst);
bool challenge1_decide(const Challenge1Instance& inst);

// Random E and a planted (x, pi); f computed from them.
std::pair<Challenge1Instance, Challenge1Solution> plant_challenge1(std::size_t n, std::uint64_t modulus,
                                                                   Rng& rng);
// E and f uniform; usually unsolvable for modulus >> n.
Challenge1Instance random_challenge1(std::size_t n, std::uint64_t modulus, Rng& rng);

// tau_{A,d} * f(d)^-1, which equals alpha_d^k'. kZeroInverse if f_d = 0.
FieldElement recover_alpha_power(const Transcript& transcript, const FieldParams& fp, const FieldElement& f_d);

// Distinct prime factors by trial division.
std::vector<std::uint64_t> factor_u64(std::uint64_t v);

}  // namespace ot12
