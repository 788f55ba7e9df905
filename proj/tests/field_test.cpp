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

#include <cmath>
#include <map>
#include <set>

#include "ot12/field.hpp"
#include "test_support.hpp"

namespace ot12 {
namespace {

using testing::fe;
using testing::throws_code;

FieldParams f7() { return make_safe_prime_params(BigInt(7)); }
FieldParams f11() { return make_safe_prime_params(BigInt(11)); }

TEST(ModPow, ZeroExponentIsOne) {
  EXPECT_EQ(mod_pow(fe(5), 0, f7()), fe(1));
  EXPECT_EQ(mod_pow(fe(0), 0, f7()), fe(1));
  EXPECT_EQ(mod_pow(fe(0), 3, f7()), fe(0));
}

TEST(ModPow, SmallValues) {
  EXPECT_EQ(mod_pow(fe(2), 10, f11()), fe(1));
  EXPECT_EQ(mod_pow(fe(2), 3, f11()), fe(8));
}

TEST(ModPow, MatchesRepeatedMultiplication) {
  const FieldParams fp = f11();
  for (unsigned long base = 0; base < 11; ++base) {
    FieldElement acc(1UL);
    for (unsigned long e = 0; e < 25; ++e) {
      EXPECT_EQ(mod_pow(fe(base), BigInt(e), fp), acc) << base << "^" << e;
      acc = mod_mul(acc, fe(base), fp);
    }
  }
}

TEST(ModPow, NegativeExponentRejected) {
  EXPECT_TRUE(throws_code([] { mod_pow(fe(2), -1, f11()); }, ErrorCode::kPreconditionViolation));
}

TEST(ModInv, KnownValues) {
  EXPECT_EQ(mod_inv(fe(1), f11()), fe(1));
  EXPECT_EQ(mod_inv(fe(2), f11()), fe(6));
  EXPECT_TRUE(throws_code([] { mod_inv(fe(0), f11()); }, ErrorCode::kZeroInverse));
}

TEST(ModInv, InverseProperty) {
  for (unsigned long p : {7UL, 11UL, 23UL, 1019UL}) {
    const FieldParams fp = make_safe_prime_params(BigInt(p));
    for (unsigned long x = 1; x < p; ++x) EXPECT_EQ(mod_mul(mod_inv(fe(x), fp), fe(x), fp), fe(1));
  }
}

TEST(Primality, SmallNumbersAgreeWithSieve) {
  std::vector<bool> composite(5000, false);
  for (std::size_t i = 2; i < composite.size(); ++i) {
    if (composite[i]) continue;
    for (std::size_t j = i * i; j < composite.size(); j += i) composite[j] = true;
  }
  for (std::size_t v = 0; v < composite.size(); ++v) {
    EXPECT_EQ(is_probable_prime(BigInt(static_cast<unsigned long>(v))), v >= 2 && !composite[v]) << v;
  }
}

TEST(Primality, CarmichaelAndLargeValues) {
  for (unsigned long c : {561UL, 1105UL, 1729UL, 2465UL, 41041UL, 825265UL}) {
    EXPECT_FALSE(is_probable_prime(BigInt(c))) << c;
  }
  EXPECT_TRUE(is_probable_prime(BigInt("170141183460469231731687303715884105727")));  // 2^127 - 1
  EXPECT_FALSE(is_probable_prime(BigInt("170141183460469231731687303715884105729")));
  // 3215031751 fools bases 2, 3, 5, 7.
  EXPECT_FALSE(is_probable_prime(BigInt(3215031751UL)));
}

TEST(SafePrime, Recognition) {
  EXPECT_TRUE(is_safe_prime(BigInt(7)));
  EXPECT_TRUE(is_safe_prime(BigInt(11)));
  EXPECT_TRUE(is_safe_prime(BigInt(23)));
  EXPECT_FALSE(is_safe_prime(BigInt(13)));
  // 5 = 2*2 + 1 has an even cofactor; excluded so that p - 1 = 2u with u odd.
  EXPECT_FALSE(is_safe_prime(BigInt(5)));
}

TEST(SafePrime, ThreeAndFourBitRanges) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = Rng::seeded(seed);
    EXPECT_EQ(generate_safe_prime(3, rng).p, 7);
    EXPECT_EQ(generate_safe_prime(4, rng).p, 11);
  }
}

TEST(SafePrime, BelowMinimumBits) {
  Rng rng = Rng::seeded(1);
  EXPECT_TRUE(throws_code([&] { generate_safe_prime(2, rng); }, ErrorCode::kPreconditionViolation));
}

TEST(SafePrime, FloorWithEmptyRange) {
  Rng rng = Rng::seeded(1);
  EXPECT_TRUE(throws_code([&] { generate_safe_prime(4, rng, std::nullopt, BigInt(11)); },
                          ErrorCode::kExhaustedAttempts));
}

TEST(SafePrime, ExactBitLengthAndStructure) {
  Rng rng = Rng::seeded(42);
  for (std::size_t bits : {5, 8, 12, 17, 24, 40, 64, 130}) {
    const FieldParams fp = generate_safe_prime(bits, rng);
    EXPECT_EQ(fp.bit_length(), bits);
    EXPECT_TRUE(is_probable_prime(fp.p));
    ASSERT_TRUE(fp.cofactor_u.has_value());
    EXPECT_TRUE(is_probable_prime(*fp.cofactor_u));
    EXPECT_EQ(2 * *fp.cofactor_u + 1, fp.p);
    EXPECT_EQ(fp.prime_factors_of_group_order, (std::vector<BigInt>{2, *fp.cofactor_u}));
    EXPECT_EQ(fp.elem_width_bytes, (bits + 7) / 8);
  }
}

TEST(SafePrime, TinyBudgetExhausts) {
  Rng rng = Rng::seeded(3);
  EXPECT_TRUE(throws_code([&] { generate_safe_prime(256, rng, 1); }, ErrorCode::kExhaustedAttempts));
}

TEST(FieldParamsCheck, RejectsBadFactorizations) {
  EXPECT_TRUE(throws_code([] { make_field_params(BigInt(11), {BigInt(2)}); }, ErrorCode::kPreconditionViolation));
  EXPECT_TRUE(throws_code([] { make_field_params(BigInt(12), {BigInt(11)}); }, ErrorCode::kPreconditionViolation));
  EXPECT_TRUE(throws_code([] { make_field_params(BigInt(31), {BigInt(2), BigInt(3), BigInt(4)}); },
                          ErrorCode::kPreconditionViolation));
  const FieldParams fp = make_field_params(BigInt(31), {BigInt(5), BigInt(2), BigInt(3)});
  EXPECT_EQ(fp.elem_width_bytes, 1U);
  EXPECT_FALSE(fp.cofactor_u.has_value());
}

TEST(Generator, KnownValues) {
  EXPECT_FALSE(is_generator(fe(1), f11()));
  EXPECT_TRUE(is_generator(fe(2), f11()));
  EXPECT_FALSE(is_generator(fe(10), f11()));
}

TEST(Generator, AgreesWithOrderComputation) {
  for (unsigned long p : {7UL, 11UL, 23UL, 31UL, 47UL, 59UL, 83UL, 107UL, 1019UL}) {
    std::vector<BigInt> factors;
    for (unsigned long f = 2, v = p - 1; v > 1; ++f) {
      if (v % f == 0) factors.emplace_back(f);
      while (v % f == 0) v /= f;
    }
    const FieldParams fp = make_field_params(BigInt(p), factors);
    for (unsigned long g = 1; g < p; ++g) {
      std::set<unsigned long> powers;
      unsigned long cur = 1;
      for (unsigned long e = 1; e < p; ++e) {
        cur = cur * g % p;
        powers.insert(cur);
      }
      EXPECT_EQ(is_generator(fe(g), fp), powers.size() == p - 1) << "p=" << p << " g=" << g;
    }
  }
}

TEST(Generator, SampledValuesAndExclusion) {
  Rng rng = Rng::seeded(9);
  const std::set<unsigned long> gens11{2, 6, 7, 8};
  std::set<unsigned long> seen;
  for (int i = 0; i < 200; ++i) {
    const auto g = sample_generator(f11(), rng).value.get_ui();
    EXPECT_TRUE(gens11.count(g)) << g;
    seen.insert(g);
  }
  EXPECT_EQ(seen, gens11);

  const std::vector<FieldElement> ex{fe(2), fe(6), fe(7)};
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_generator(f11(), rng, ex), fe(8));

  for (int i = 0; i < 50; ++i) {
    const auto g = sample_generator(f7(), rng).value.get_ui();
    EXPECT_TRUE(g == 3 || g == 5) << g;
  }

  const std::vector<FieldElement> all{fe(2), fe(6), fe(7), fe(8)};
  EXPECT_TRUE(throws_code([&] { sample_generator(f11(), rng, all, 500); }, ErrorCode::kExhaustedAttempts));
}

TEST(Generator, PowersCoverUnitGroup) {
  Rng rng = Rng::seeded(5);
  for (std::size_t bits : {8, 12, 16}) {
    const FieldParams fp = generate_safe_prime(bits, rng);
    const FieldElement g = sample_generator(fp, rng);
    const unsigned long p = fp.p.get_ui();
    std::vector<bool> hit(p, false);
    unsigned long cur = 1;
    const unsigned long gv = g.value.get_ui();
    std::size_t distinct = 0;
    for (unsigned long e = 1; e < p; ++e) {
      cur = cur * gv % p;
      if (!hit[cur]) ++distinct;
      hit[cur] = true;
    }
    EXPECT_EQ(distinct, p - 1);
  }
}

TEST(Encoding, FixedWidthBigEndian) {
  const FieldParams fp = make_safe_prime_params(BigInt(1019));
  EXPECT_EQ(encode_element(fe(3), fp), (std::vector<std::uint8_t>{0x00, 0x03}));
  EXPECT_EQ(encode_element(fe(1018), fp), (std::vector<std::uint8_t>{0x03, 0xfa}));
  EXPECT_EQ(decode_element(std::vector<std::uint8_t>{0x03, 0xfa}, fp), fe(1018));
  EXPECT_TRUE(throws_code([&] { decode_element(std::vector<std::uint8_t>{0x03, 0xfb}, fp); },
                          ErrorCode::kMalformedMessage));
  EXPECT_TRUE(throws_code([&] { decode_element(std::vector<std::uint8_t>{0x03}, fp); },
                          ErrorCode::kMalformedMessage));
}

TEST(Permutation, SmallCases) {
  Rng rng = Rng::seeded(1);
  EXPECT_EQ(sample_permutation(1, rng), Permutation::identity(1));
  for (int i = 0; i < 100; ++i) {
    auto images = sample_permutation(5, rng).images();
    std::sort(images.begin(), images.end());
    EXPECT_EQ(images, (std::vector<std::uint32_t>{1, 2, 3, 4, 5}));
  }
  EXPECT_TRUE(throws_code([] { Permutation::from_images({1, 1}); }, ErrorCode::kPreconditionViolation));
  EXPECT_TRUE(throws_code([] { Permutation::from_images({0, 1}); }, ErrorCode::kPreconditionViolation));
}

TEST(Permutation, TwoElementBalance) {
  Rng rng = Rng::seeded(2);
  const int draws = 10000;
  int swaps = 0;
  for (int i = 0; i < draws; ++i) swaps += sample_permutation(2, rng)(1) == 2 ? 1 : 0;
  const double e = draws / 2.0;
  const double chi2 = 2 * (swaps - e) * (swaps - e) / e;
  EXPECT_LT(chi2, 10.83);  // 1 dof, p = 0.001
}

TEST(Permutation, ThreeElementUniformity) {
  Rng rng = Rng::seeded(3);
  const int draws = 100000;
  std::map<std::vector<std::uint32_t>, int> counts;
  for (int i = 0; i < draws; ++i) ++counts[sample_permutation(3, rng).images()];
  ASSERT_EQ(counts.size(), 6U);
  const double expected = draws / 6.0;
  const double sigma = std::sqrt(draws * (1.0 / 6) * (5.0 / 6));
  for (const auto& [perm, c] : counts) EXPECT_LT(std::abs(c - expected), 5 * sigma);
}

}  // namespace
}  // namespace ot12
