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
#include <cmath>

#include "ot12/params.hpp"
#include "test_support.hpp"

namespace ot12 {
namespace {

using testing::fe;
using testing::throws_code;

bool has_kind(const std::vector<Violation>& v, ViolationKind k) {
  const auto kinds = violation_kinds(v);
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

TEST(PrimeSize, Formula) {
  EXPECT_EQ(prime_bit_length_for(2), 3U);
  EXPECT_EQ(prime_bit_length_for(64), 20U);
  EXPECT_EQ(prime_bit_length_for(8), 7U);  // ceil(log2 67) beats ceil(sqrt 24)
  for (std::size_t n = 2; n <= 200; ++n) {
    const double lg = std::log2(static_cast<double>(n));
    const std::size_t expected = std::max<std::size_t>(
        {static_cast<std::size_t>(std::ceil(std::sqrt(n * lg) - 1e-12)),
         static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n * n + 3)))), 3});
    EXPECT_EQ(prime_bit_length_for(n), expected) << n;
  }
  EXPECT_EQ(prime_floor_for(4), 18);
}

TEST(Setup, TwoBitsGivesSeven) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng = Rng::seeded(seed);
    const ProtocolParams params = setup(2, rng);
    EXPECT_EQ(params.fp.p, 7);
    EXPECT_EQ(params.q, 128U);
    EXPECT_TRUE(validate(params).empty());
  }
}

TEST(Setup, ThreeSkipsElevenAtTheFloor) {
  // Four bits hold only 11, which is not above 3^2 + 2.
  Rng rng = Rng::seeded(1);
  const ProtocolParams params = setup(3, rng);
  EXPECT_EQ(params.fp.p, 23);
}

TEST(Setup, SixtyFourUsesTwentyBits) {
  Rng rng = Rng::seeded(1);
  const ProtocolParams params = setup(64, rng);
  EXPECT_EQ(params.fp.bit_length(), 20U);
  EXPECT_TRUE(validate(params).empty());
}

TEST(Setup, Overrides) {
  Rng rng = Rng::seeded(1);
  SetupOptions o;
  o.p = BigInt(11);
  EXPECT_EQ(setup(2, rng, o).fp.p, 11);

  o.p = BigInt(13);  // 13 <= 4^2 + 2
  EXPECT_TRUE(throws_code([&] { setup(4, rng, o); }, ErrorCode::kInvalidOverride));
  o.p = BigInt(15);
  EXPECT_TRUE(throws_code([&] { setup(2, rng, o); }, ErrorCode::kInvalidOverride));
  o.p = BigInt(31);  // not safe, no factors given
  EXPECT_TRUE(throws_code([&] { setup(2, rng, o); }, ErrorCode::kInvalidOverride));
  o.p_factors = std::vector<BigInt>{2, 3, 5};
  EXPECT_EQ(setup(2, rng, o).fp.p, 31);

  SetupOptions q;
  q.q = 7;
  EXPECT_TRUE(throws_code([&] { setup(2, rng, q); }, ErrorCode::kInvalidOverride));
  q.q = 64;
  EXPECT_EQ(setup(2, rng, q).q, 64U);

  EXPECT_TRUE(throws_code([&] { setup(1, rng); }, ErrorCode::kPreconditionViolation));
}

TEST(Setup, AlwaysValid) {
  for (std::size_t n = 2; n <= 32; ++n) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      Rng rng = Rng::seeded(seed * 1000 + n);
      const ProtocolParams params = setup(n, rng);
      const auto problems = validate(params);
      EXPECT_TRUE(problems.empty()) << "n=" << n << " seed=" << seed << " " << problems.front().detail;
      EXPECT_GT(params.fp.p, prime_floor_for(n));
      EXPECT_GE(params.fp.bit_length(), prime_bit_length_for(n));
    }
  }
}

TEST(Setup, DeterministicUnderSeed) {
  Rng a = Rng::seeded(77);
  Rng b = Rng::seeded(77);
  EXPECT_EQ(save_params(setup(5, a)), save_params(setup(5, b)));
}

TEST(Setup, MatrixEntriesUniform) {
  // Entries over p = 11: chi-square with 10 dof.
  SetupOptions o;
  o.p = BigInt(11);
  o.q = 8;
  std::vector<int> counts(11, 0);
  int total = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng = Rng::seeded(seed);
    const ProtocolParams params = setup(2, rng, o);
    for (const auto& row : params.matrix) {
      for (const auto& c : row) {
        ++counts[c.value.get_ui()];
        ++total;
      }
    }
  }
  double chi2 = 0;
  const double e = total / 11.0;
  for (int c : counts) chi2 += (c - e) * (c - e) / e;
  EXPECT_LT(chi2, 29.59);  // p = 0.001
}

TEST(Validate, ReportsEveryViolation) {
  Rng rng = Rng::seeded(1);
  ProtocolParams params = setup(4, rng);
  ASSERT_TRUE(validate(params).empty());

  ProtocolParams shape = params;
  shape.matrix.pop_back();
  EXPECT_EQ(violation_kinds(validate(shape)), std::vector<ViolationKind>{ViolationKind::kShapeMismatch});

  ProtocolParams small = params;
  small.fp = make_field_params(BigInt(13), {BigInt(2), BigInt(3)});
  for (auto& row : small.matrix) {
    for (auto& c : row) c = reduce(c.value, small.fp);
  }
  EXPECT_EQ(violation_kinds(validate(small)), std::vector<ViolationKind>{ViolationKind::kPrimeTooSmall});
  EXPECT_TRUE(validate(small, ValidateOptions{false, false}).empty());

  ProtocolParams composite = params;
  composite.fp = make_field_params_unchecked(BigInt(25), {BigInt(2), BigInt(5)});
  EXPECT_TRUE(has_kind(validate(composite), ViolationKind::kPrimalityFailure));
  EXPECT_TRUE(has_kind(validate(composite), ViolationKind::kFactorizationMismatch));

  ProtocolParams entry = params;
  entry.matrix[0][0] = FieldElement(params.fp.p);
  EXPECT_TRUE(has_kind(validate(entry), ViolationKind::kEntryOutOfRange));

  ProtocolParams q = params;
  q.q = 4;
  EXPECT_TRUE(has_kind(validate(q), ViolationKind::kQOutOfRange));

  ProtocolParams toy = params;
  toy.h2 = make_toy_identity_h2(params.q);
  EXPECT_TRUE(has_kind(validate(toy), ViolationKind::kToyHashNotAllowed));
  EXPECT_TRUE(validate(toy, ValidateOptions{true, true}).empty());

  ProtocolParams many = params;
  many.matrix.pop_back();
  many.q = 300;
  many.n = 1;
  EXPECT_GE(validate(many).size(), 3U);
}

TEST(Serialization, RoundTrip) {
  for (std::size_t n : {2, 3, 8, 17}) {
    Rng rng = Rng::seeded(n);
    const ProtocolParams params = setup(n, rng);
    const std::string text = save_params(params);
    EXPECT_EQ(load_params(text), params);
    EXPECT_EQ(save_params(load_params(text)), text);
  }
  const ProtocolParams worked = testing::worked_params();
  EXPECT_EQ(load_params(save_params(worked)), worked);
  ProtocolParams toy = worked;
  toy.h2 = make_toy_identity_h2(8);
  EXPECT_EQ(load_params(save_params(toy)), toy);
}

TEST(Serialization, DigestKnownAnswer) {
  // json.dumps(doc, indent=2, sort_keys=True) in tests/oracles/worked_example.py.
  const auto d = params_digest(testing::worked_params());
  EXPECT_EQ(to_hex(d), "90677cc30c211fda");
}

TEST(Serialization, TruncatedInputReportsPosition) {
  Rng rng = Rng::seeded(1);
  const std::string text = save_params(setup(3, rng));
  try {
    load_params(text.substr(0, 40));
    FAIL();
  } catch (const PositionedError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_GT(e.offset(), 0U);
    EXPECT_LE(e.offset(), 41U);
  }
  EXPECT_TRUE(throws_code([] { load_params("[]"); }, ErrorCode::kParseError));
  EXPECT_TRUE(throws_code([] { load_params("{\"version\": 1}"); }, ErrorCode::kParseError));
}

TEST(Serialization, NonPrimeLoadsButFailsValidation) {
  Rng rng = Rng::seeded(1);
  std::string text = save_params(setup(2, rng));
  const auto at = text.find("\"p\": \"7\"");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 8, "\"p\": \"9\"");
  const ProtocolParams loaded = load_params(text);
  EXPECT_TRUE(has_kind(validate(loaded), ViolationKind::kPrimalityFailure));
}

TEST(Serialization, BadFieldsAreParseErrors) {
  Rng rng = Rng::seeded(1);
  const std::string text = save_params(setup(2, rng));
  auto mutate = [&](const std::string& from, const std::string& to) {
    std::string t = text;
    const auto at = t.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    t.replace(at, from.size(), to);
    return t;
  };
  EXPECT_TRUE(throws_code([&] { load_params(mutate("\"version\": 1", "\"version\": 2")); }, ErrorCode::kParseError));
  EXPECT_TRUE(throws_code([&] { load_params(mutate("\"p\": \"7\"", "\"p\": \"7x\"")); }, ErrorCode::kParseError));
  EXPECT_TRUE(throws_code([&] { load_params(mutate("\"p\": \"7\"", "\"p\": 7")); }, ErrorCode::kParseError));
  EXPECT_TRUE(throws_code([&] { load_params(mutate("\"discrete_exp\"", "\"sha3\"")); }, ErrorCode::kParseError));
}

}  // namespace
}  // namespace ot12
