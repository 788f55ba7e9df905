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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "ot12/analysis.hpp"
#include "test_support.hpp"

namespace ot12 {
namespace {

using testing::fe;
using testing::throws_code;
using testing::worked_alice_secrets;
using testing::worked_bob_secrets;
using testing::worked_params;

FieldParams params_for(std::uint64_t p) {
  std::vector<BigInt> factors;
  for (auto f : factor_u64(p - 1)) factors.emplace_back(static_cast<unsigned long>(f));
  return make_field_params(BigInt(static_cast<unsigned long>(p)), factors);
}

TEST(FactorU64, Values) {
  EXPECT_EQ(factor_u64(30), (std::vector<std::uint64_t>{2, 3, 5}));
  EXPECT_EQ(factor_u64(10006), (std::vector<std::uint64_t>{2, 5003}));
  EXPECT_EQ(factor_u64(1024), (std::vector<std::uint64_t>{2}));
  EXPECT_EQ(factor_u64(1), (std::vector<std::uint64_t>{}));
}

TEST(Dlog, SmallKnownValues) {
  const DlogOracle ex(params_for(11), fe(2), DlogMethod::kExhaustive);
  const DlogOracle bs(params_for(11), fe(2), DlogMethod::kBabyStepGiantStep);
  EXPECT_EQ(ex.log(fe(1)), 0U);
  EXPECT_EQ(ex.log(fe(8)), 3U);
  EXPECT_EQ(bs.log(fe(1)), 0U);
  EXPECT_EQ(bs.log(fe(8)), 3U);
  EXPECT_TRUE(throws_code([&] { ex.log(fe(0)); }, ErrorCode::kPreconditionViolation));
  EXPECT_TRUE(throws_code([] { DlogOracle(params_for(11), fe(10), DlogMethod::kExhaustive); },
                          ErrorCode::kPreconditionViolation));
}

TEST(Dlog, AgreesWithPowerTable) {
  Rng rng = Rng::seeded(4);
  for (std::uint64_t p : {7ULL, 31ULL, 1009ULL, 65537ULL}) {
    const FieldParams fp = params_for(p);
    const FieldElement g = sample_generator(fp, rng);
    const DlogOracle bs(fp, g, DlogMethod::kBabyStepGiantStep);
    const unsigned long gv = g.value.get_ui();
    unsigned long cur = 1;
    for (std::uint64_t e = 0; e + 1 < p; ++e) {
      ASSERT_EQ(bs.log(fe(cur)), e) << "p=" << p;
      cur = cur * gv % p;
    }
  }
}

TEST(Dlog, BudgetLimits) {
  Rng rng = Rng::seeded(1);
  const FieldParams big = generate_safe_prime(41, rng);
  const FieldElement g = sample_generator(big, rng);
  EXPECT_TRUE(throws_code([&] { DlogOracle(big, g, DlogMethod::kBabyStepGiantStep); }, ErrorCode::kOutOfRange));
  const FieldParams mid = generate_safe_prime(33, rng);
  EXPECT_TRUE(throws_code([&] { DlogOracle(mid, sample_generator(mid, rng), DlogMethod::kExhaustive); },
                          ErrorCode::kOutOfRange));
  const FieldParams ok = generate_safe_prime(36, rng);
  const FieldElement g36 = sample_generator(ok, rng);
  const DlogOracle bs(ok, g36, DlogMethod::kBabyStepGiantStep);
  const BigInt e("12345678901");
  EXPECT_EQ(bs.log(mod_pow(g36, e, ok)), 12345678901ULL);
}

Transcript seeded_transcript(std::size_t n, std::uint64_t seed, BitVector* t_out) {
  Rng rng = Rng::seeded(seed);
  const ProtocolParams params = setup(n, rng);
  AliceSession alice(params, BitString::random(128, rng), BitString::random(128, rng), rng);
  BobSession bob(params, rng);
  const Transcript tr = execute(alice, bob, Side::kA).transcript;
  if (t_out) *t_out = alice.secrets().t;
  return tr;
}

TEST(SubsetCongruence, InstanceFromTranscript) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BitVector t;
    Rng rng = Rng::seeded(seed);
    const ProtocolParams params = setup(4, rng);
    AliceSession alice(params, BitString::random(128, rng), BitString::random(128, rng), rng);
    BobSession bob(params, rng);
    const Transcript tr = execute(alice, bob, Side::kB).transcript;
    const DlogOracle oracle(params.fp, sample_generator(params.fp, rng), DlogMethod::kBabyStepGiantStep);
    const SubsetCongruence inst = build_subset_congruence(tr, oracle);
    ASSERT_EQ(inst.coeffs.size(), 4U);
    EXPECT_EQ(inst.modulus + 1, params.fp.p);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_LT(inst.coeffs[i], inst.modulus);
      EXPECT_EQ(mod_pow(oracle.generator(), BigInt(static_cast<unsigned long>(inst.coeffs[i])), params.fp),
                tr.r4.nu[i]);
    }
    EXPECT_EQ(mod_pow(oracle.generator(), BigInt(static_cast<unsigned long>(inst.target)), params.fp), tr.r5.tau_b);
    EXPECT_TRUE(satisfies(inst, alice.secrets().t));
    const auto sols = enumerate_congruence_solutions(inst);
    EXPECT_NE(std::find(sols.begin(), sols.end(), alice.secrets().t), sols.end());
  }
}

TEST(SubsetCongruence, EnumerationMatchesBruteForce) {
  Rng rng = Rng::seeded(12);
  for (int rep = 0; rep < 30; ++rep) {
    SubsetCongruence inst;
    inst.modulus = 2 + rng.uniform_below(40);
    const std::size_t n = 1 + rng.uniform_below(10);
    for (std::size_t i = 0; i < n; ++i) inst.coeffs.push_back(rng.uniform_below(inst.modulus));
    inst.target = rng.uniform_below(inst.modulus);
    std::vector<BitVector> expected;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      BitVector x(n);
      std::uint64_t sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = (mask >> i) & 1U;
        if (x[i]) sum += inst.coeffs[i];
      }
      if (sum % inst.modulus == inst.target) expected.push_back(x);
    }
    EXPECT_EQ(enumerate_congruence_solutions(inst), expected);
    EXPECT_EQ(count_congruence_solutions(inst), expected.size());
  }
}

TEST(SubsetCongruence, DegenerateAndBudget) {
  SubsetCongruence zero{{0, 0, 0, 0, 0}, 0, 30};
  EXPECT_EQ(enumerate_congruence_solutions(zero).size(), 32U);
  SubsetCongruence huge{std::vector<std::uint64_t>(25, 1), 0, 30};
  EXPECT_TRUE(throws_code([&] { count_congruence_solutions(huge); }, ErrorCode::kBudgetExceeded));
}

TEST(Density, SmallPrimeReport) {
  Rng rng = Rng::seeded(1);
  const DensityReport r = solution_density_experiment(DensityOptions{8, 31, 50, 4}, rng);
  ASSERT_EQ(r.trials.size(), 50U);
  EXPECT_NEAR(r.predicted, 256.0 / 31.0, 1e-12);
  for (const auto& t : r.trials) {
    EXPECT_GE(t.measured_count, 1U);
    EXPECT_TRUE(t.planted_found);
    EXPECT_EQ(t.p, 31U);
  }
  EXPECT_GE(r.mean_count, 1.0);
  EXPECT_GT(r.mean_count, r.predicted / 4);
  EXPECT_LT(r.mean_count, r.predicted * 4);
}

TEST(Density, LargePrimeConcentratesOnPlanted) {
  Rng rng = Rng::seeded(2);
  const DensityReport r = solution_density_experiment(DensityOptions{4, 1009, 50, 2}, rng);
  EXPECT_LT(r.predicted, 1.0);
  std::size_t exactly_one = 0;
  for (const auto& t : r.trials) {
    EXPECT_TRUE(t.planted_found);
    exactly_one += t.measured_count == 1 ? 1 : 0;
  }
  EXPECT_GE(exactly_one, 45U);
}

TEST(Density, IndependentOfThreadCount) {
  Rng a = Rng::seeded(9);
  Rng b = Rng::seeded(9);
  const auto r1 = solution_density_experiment(DensityOptions{6, 31, 12, 1}, a);
  const auto r2 = solution_density_experiment(DensityOptions{6, 31, 12, 5}, b);
  std::ostringstream c1, c2;
  write_density_csv(c1, r1);
  write_density_csv(c2, r2);
  EXPECT_EQ(c1.str(), c2.str());
}

TEST(Density, CsvAndErrors) {
  Rng rng = Rng::seeded(3);
  const auto r = solution_density_experiment(DensityOptions{4, 31, 3, 1}, rng);
  std::ostringstream csv;
  write_density_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "seed,n,p,measured_count,predicted");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 3);
  std::ostringstream summary;
  write_density_summary(summary, r);
  EXPECT_NE(summary.str().find("planted t found:  3/3"), std::string::npos);

  EXPECT_TRUE(throws_code([&] { solution_density_experiment(DensityOptions{17, 31, 1, 1}, rng); },
                          ErrorCode::kBudgetExceeded));
  EXPECT_TRUE(throws_code([&] { solution_density_experiment(DensityOptions{4, 33, 1, 1}, rng); },
                          ErrorCode::kPreconditionViolation));
}

TEST(Challenge1, HandCheckedSingleRow) {
  const Challenge1Instance inst{1, 10, {{5}}, {6}};
  EXPECT_TRUE(satisfies(inst, {1}, Permutation::identity(1)));
  const auto sol = challenge1_search(inst);
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(sol->x, BitVector{1});
  EXPECT_TRUE(challenge1_decide(inst));
}

TEST(Challenge1, PlantedInstancesSolved) {
  Rng rng = Rng::seeded(6);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      auto [inst, planted] = plant_challenge1(n, 1008, rng);
      EXPECT_TRUE(satisfies(inst, planted.x, planted.pi));
      const auto sol = challenge1_search(inst);
      ASSERT_TRUE(sol.has_value());
      EXPECT_TRUE(satisfies(inst, sol->x, sol->pi));
      EXPECT_TRUE(challenge1_decide(inst));
    }
  }
}

TEST(Challenge1, ShiftedRowHasNoSolution) {
  Rng rng = Rng::seeded(7);
  int checked = 0;
  for (int rep = 0; rep < 40 && checked < 10; ++rep) {
    auto [inst, planted] = plant_challenge1(4, 1008, rng);
    // Only use instances whose planted pair is the unique solution.
    int solutions = 0;
    std::vector<std::uint32_t> images(4);
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
      BitVector x(4);
      for (std::size_t j = 0; j < 4; ++j) x[j] = (mask >> j) & 1U;
      std::iota(images.begin(), images.end(), 1U);
      do {
        solutions += satisfies(inst, x, Permutation::from_images(images)) ? 1 : 0;
      } while (std::next_permutation(images.begin(), images.end()));
    }
    if (solutions != 1) continue;
    // A +1 shift on one row can only be absorbed by a different permutation
    // value, which breaks the bijection unless the row was the largest.
    Challenge1Instance shifted = inst;
    const std::size_t row = rep % 4;
    shifted.f[row] = (shifted.f[row] + 1) % shifted.modulus;
    const bool found = challenge1_decide(shifted);
    EXPECT_EQ(found, challenge1_search(shifted).has_value());
    if (!found) ++checked;
  }
  EXPECT_GE(checked, 5);
}

TEST(Challenge1, DecideMatchesSearchOnRandomInstances) {
  Rng rng = Rng::seeded(8);
  int solvable = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rep % 5;
    const Challenge1Instance inst = random_challenge1(n, 2 + rng.uniform_below(12), rng);
    const auto sol = challenge1_search(inst);
    EXPECT_EQ(challenge1_decide(inst), sol.has_value());
    if (sol) {
      EXPECT_TRUE(satisfies(inst, sol->x, sol->pi));
      ++solvable;
    }
  }
  EXPECT_GT(solvable, 0);
  EXPECT_LT(solvable, 100);
}

TEST(Challenge1, Budget) {
  Rng rng = Rng::seeded(1);
  const Challenge1Instance inst = random_challenge1(9, 100, rng);
  EXPECT_TRUE(throws_code([&] { challenge1_search(inst); }, ErrorCode::kBudgetExceeded));
}

TEST(AlphaPower, WorkedInstance) {
  const ProtocolParams params = worked_params();
  AliceSession alice = AliceSession::from_secrets(params, worked_alice_secrets());
  BobSession bob = BobSession::from_secrets(params, worked_bob_secrets());
  const Transcript tr = execute(alice, bob, Side::kA).transcript;
  const FieldElement f5 = eval_f(params, {1, 1}, {0, 1}, fe(5));
  EXPECT_EQ(f5, fe(8));
  EXPECT_EQ(recover_alpha_power(tr, params.fp, f5), fe(4));
  EXPECT_TRUE(throws_code([&] { recover_alpha_power(tr, params.fp, fe(0)); }, ErrorCode::kZeroInverse));
}

TEST(AlphaPower, EmptyTMeansTau) {
  const ProtocolParams params = worked_params();
  AliceSecrets as = worked_alice_secrets();
  as.t = {0, 0};
  AliceSession alice = AliceSession::from_secrets(params, as);
  BobSession bob = BobSession::from_secrets(params, worked_bob_secrets());
  const Transcript tr = execute(alice, bob, Side::kB).transcript;
  const FieldElement f = eval_f(params, as.t, {0, 1}, as.b);
  EXPECT_EQ(f, fe(1));
  EXPECT_EQ(recover_alpha_power(tr, params.fp, f), tr.r2.tau_b);
}

TEST(AlphaPower, MatchesSessionSecrets) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng = Rng::seeded(seed);
    const std::size_t n = 2 + seed % 7;
    const ProtocolParams params = setup(n, rng);
    AliceSession alice(params, BitString::random(128, rng), BitString::random(128, rng), rng);
    BobSession bob(params, rng);
    const Side side = seed % 2 ? Side::kA : Side::kB;
    const Transcript tr = execute(alice, bob, side).transcript;
    const AliceSecrets& as = alice.secrets();
    const FieldElement& d = side == Side::kA ? as.a : as.b;
    const FieldElement& alpha = side == Side::kA ? as.alpha_a : as.alpha_b;
    const Permutation& sigma = side == Side::kA ? as.sigma_a : as.sigma_b;
    const FieldElement got = recover_alpha_power(tr, params.fp, eval_f(params, as.t, bob.secrets().s, d));
    const std::size_t k = blinding_exponent(sigma, bob.secrets().s);
    EXPECT_LE(k, n * (n + 1) / 2);
    EXPECT_EQ(got, mod_pow(alpha, BigInt(static_cast<unsigned long>(k)), params.fp));
  }
}

}  // namespace
}  // namespace ot12
