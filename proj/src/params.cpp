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

#include "ot12/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ot12/error.hpp"

namespace ot12 {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxPrimeBits = 4096;

json decimal_list(const std::vector<BigInt>& values) {
  json out = json::array();
  for (const BigInt& v : values) out.push_back(v.get_str());
  return out;
}

[[noreturn]] void parse_fail(const std::string& what) {
  throw PositionedError(ErrorCode::kParseError, 0, what);
}

BigInt parse_decimal(const json& j, const std::string& field) {
  if (!j.is_string()) parse_fail("'" + field + "' must be a decimal string");
  const auto& s = j.get_ref<const std::string&>();
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    parse_fail("'" + field + "' is not a non-negative decimal integer");
  }
  return BigInt(s, 10);
}

std::vector<BigInt> parse_decimal_list(const json& j, const std::string& field) {
  if (!j.is_array()) parse_fail("'" + field + "' must be an array");
  std::vector<BigInt> out;
  for (const json& e : j) out.push_back(parse_decimal(e, field));
  return out;
}

const json& member(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

std::size_t parse_count(const json& j, const std::string& field) {
  if (!j.is_number_unsigned()) parse_fail("'" + field + "' must be a non-negative integer");
  return j.get<std::size_t>();
}

FieldParams field_for_override(const BigInt& p, const std::optional<std::vector<BigInt>>& factors) {
  try {
    if (factors) return make_field_params(p, *factors);
    return make_safe_prime_params(p);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidOverride, std::string("explicit p rejected: ") + e.what());
  }
}

}  // namespace

std::size_t prime_bit_length_for(std::size_t n) {
  const double nd = static_cast<double>(n);
  const auto size_term = static_cast<std::size_t>(std::ceil(std::sqrt(nd * std::log2(nd))));
  // ceil(log2(x)) == bit_length(x - 1) for x >= 2.
  const std::size_t floor_term = bit_length(BigInt(prime_floor_for(n)));
  return std::max({size_term, floor_term, std::size_t{3}});
}

BigInt prime_floor_for(std::size_t n) {
  BigInt nn(static_cast<unsigned long>(n));
  return nn * nn + 2;
}

ProtocolParams setup(std::size_t n, Rng& rng, const SetupOptions& options) {
  if (n < 2) throw Error(ErrorCode::kPreconditionViolation, "n must be at least 2");

  ProtocolParams params;
  params.n = n;
  params.q = options.q.value_or(kDefaultQ);
  if (params.q < kMinQ || params.q > kSha256Bits) {
    throw Error(ErrorCode::kInvalidOverride, "q must lie in [8, 256]");
  }

  const BigInt floor = prime_floor_for(n);
  if (options.p) {
    params.fp = field_for_override(*options.p, options.p_factors);
    if (options.enforce_prime_floor && params.fp.p <= floor) {
      throw Error(ErrorCode::kInvalidOverride,
                  "p = " + params.fp.p.get_str() + " must exceed n^2 + 2 = " + floor.get_str());
    }
  } else {
    // The size formula can land on a bit length whose safe primes all sit at
    // or below the floor (n = 3 gives 4 bits, only 11); move up until one fits.
    const BigInt effective_floor = options.enforce_prime_floor ? floor : BigInt(0);
    for (std::size_t bits = prime_bit_length_for(n);; ++bits) {
      try {
        params.fp = generate_safe_prime(bits, rng, std::nullopt, effective_floor);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kExhaustedAttempts || bits > 16 || bits >= kMaxPrimeBits) throw;
      }
    }
  }

  params.matrix.assign(n, std::vector<FieldElement>(n));
  for (auto& row : params.matrix) {
    for (auto& entry : row) entry = FieldElement(rng.uniform_below(params.fp.p));
  }

  params.h1 = H1Spec{"sha256", params.q, kDefaultH1Tag};
  params.h2 = options.h2_variant == H2Variant::kToyIdentity ? make_toy_identity_h2(params.q)
                                                              : make_discrete_exp_h2(params.q, rng);
  return params;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNTooSmall: return "NTooSmall";
    case ViolationKind::kShapeMismatch: return "ShapeMismatch";
    case ViolationKind::kEntryOutOfRange: return "EntryOutOfRange";
    case ViolationKind::kPrimalityFailure: return "PrimalityFailure";
    case ViolationKind::kFactorizationMismatch: return "FactorizationMismatch";
    case ViolationKind::kWidthMismatch: return "WidthMismatch";
    case ViolationKind::kPrimeTooSmall: return "PrimeTooSmall";
    case ViolationKind::kQOutOfRange: return "QOutOfRange";
    case ViolationKind::kH1SpecInvalid: return "H1SpecInvalid";
    case ViolationKind::kH2SpecInvalid: return "H2SpecInvalid";
    case ViolationKind::kToyHashNotAllowed: return "ToyHashNotAllowed";
  }
  return "Unknown";
}

std::vector<Violation> validate(const ProtocolParams& params, const ValidateOptions& options) {
  std::vector<Violation> out;
  auto report = [&out](ViolationKind kind, std::string detail) {
    out.push_back({kind, std::move(detail)});
  };

  if (params.n < 2) report(ViolationKind::kNTooSmall, "n must be at least 2");

  bool shape_ok = params.matrix.size() == params.n;
  for (const auto& row : params.matrix) shape_ok = shape_ok && row.size() == params.n;
  if (!shape_ok) {
    report(ViolationKind::kShapeMismatch, "C must be " + std::to_string(params.n) + "x" +
                                              std::to_string(params.n));
  }
  for (const auto& row : params.matrix) {
    for (const auto& entry : row) {
      if (entry.value < 0 || entry.value >= params.fp.p) {
        report(ViolationKind::kEntryOutOfRange, "matrix entry " + entry.value.get_str() + " not in [0, p)");
      }
    }
  }

  const FieldParams& fp = params.fp;
  if (!is_probable_prime(fp.p)) {
    report(ViolationKind::kPrimalityFailure, "p = " + fp.p.get_str() + " is not prime");
  }
  if (auto problem = factorization_problem(fp.p, fp.prime_factors_of_group_order)) {
    report(ViolationKind::kFactorizationMismatch, *problem);
  }
  if (fp.elem_width_bytes < 1 || fp.elem_width_bytes != std::max<std::size_t>(1, (bit_length(fp.p) + 7) / 8)) {
    report(ViolationKind::kWidthMismatch, "element width disagrees with bitlen(p)");
  }
  if (options.enforce_prime_floor && params.n >= 2 && fp.p <= prime_floor_for(params.n)) {
    report(ViolationKind::kPrimeTooSmall,
           "p = " + fp.p.get_str() + " must exceed n^2 + 2 = " + prime_floor_for(params.n).get_str());
  }

  if (params.q < kMinQ || params.q > kSha256Bits) {
    report(ViolationKind::kQOutOfRange, "q = " + std::to_string(params.q) + " outside [8, 256]");
  }
  auto h1_problems = h1_spec_problems(params.h1);
  if (params.h1.q != params.q) h1_problems.push_back("h1 output length differs from q");
  for (auto& p : h1_problems) report(ViolationKind::kH1SpecInvalid, std::move(p));

  auto h2_problems = h2_spec_problems(params.h2);
  if (params.h2.q != params.q) h2_problems.push_back("h2 input length differs from q");
  for (auto& p : h2_problems) report(ViolationKind::kH2SpecInvalid, std::move(p));
  if (params.h2.variant == H2Variant::kToyIdentity && !options.allow_toy_h2) {
    report(ViolationKind::kToyHashNotAllowed, "toy_identity h2 is not one-way; test mode only");
  }
  return out;
}

std::vector<ViolationKind> violation_kinds(const std::vector<Violation>& violations) {
  std::vector<ViolationKind> out;
  for (const auto& v : violations) out.push_back(v.kind);
  return out;
}

std::string save_params(const ProtocolParams& params) {
  json c = json::array();
  for (const auto& row : params.matrix) {
    for (const auto& entry : row) c.push_back(entry.value.get_str());
  }
  json h2 = {{"variant", std::string(to_string(params.h2.variant))}, {"qprime", params.h2.qprime}};
  if (params.h2.variant == H2Variant::kDiscreteExp) {
    h2["P"] = params.h2.field.p.get_str();
    h2["G"] = params.h2.generator.get_str();
    h2["factors_of_P_minus_1"] = decimal_list(params.h2.field.prime_factors_of_group_order);
  }
  json doc = {
      {"version", kParamsFormatVersion},
      {"n", params.n},
      {"p", params.fp.p.get_str()},
      {"factors_of_p_minus_1", decimal_list(params.fp.prime_factors_of_group_order)},
      {"C", std::move(c)},
      {"q", params.q},
      {"h1", {{"algorithm", params.h1.algorithm}, {"domain_tag", params.h1.domain_tag}}},
      {"h2", std::move(h2)},
  };
  return doc.dump(2) + "\n";
}

ProtocolParams load_params(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw PositionedError(ErrorCode::kParseError, e.byte, e.what());
  }
  if (!doc.is_object()) parse_fail("parameter document must be a JSON object");

  try {
    if (parse_count(member(doc, "version"), "version") != kParamsFormatVersion) {
      parse_fail("unsupported parameter format version");
    }
    ProtocolParams params;
    params.n = parse_count(member(doc, "n"), "n");
    params.fp = make_field_params_unchecked(parse_decimal(member(doc, "p"), "p"),
                                            parse_decimal_list(member(doc, "factors_of_p_minus_1"),
                                                               "factors_of_p_minus_1"));
    const auto flat = parse_decimal_list(member(doc, "C"), "C");
    if (flat.size() != params.n * params.n) {
      parse_fail("C holds " + std::to_string(flat.size()) + " entries, expected n*n = " +
                 std::to_string(params.n * params.n));
    }
    params.matrix.assign(params.n, {});
    for (std::size_t i = 0; i < params.n; ++i) {
      for (std::size_t j = 0; j < params.n; ++j) {
        params.matrix[i].emplace_back(flat[i * params.n + j]);
      }
    }
    params.q = parse_count(member(doc, "q"), "q");

    const json& h1 = member(doc, "h1");
    params.h1.algorithm = member(h1, "algorithm").get<std::string>();
    params.h1.domain_tag = member(h1, "domain_tag").get<std::string>();
    params.h1.q = params.q;

    const json& h2 = member(doc, "h2");
    const H2Variant variant = h2_variant_from_string(member(h2, "variant").get<std::string>());
    if (variant == H2Variant::kToyIdentity) {
      params.h2 = make_toy_identity_h2(params.q);
    } else {
      params.h2.variant = variant;
      params.h2.q = params.q;
      params.h2.field = make_field_params_unchecked(
          parse_decimal(member(h2, "P"), "h2.P"),
          parse_decimal_list(member(h2, "factors_of_P_minus_1"), "h2.factors_of_P_minus_1"));
      params.h2.generator = parse_decimal(member(h2, "G"), "h2.G");
    }
    params.h2.qprime = parse_count(member(h2, "qprime"), "h2.qprime");
    return params;
  } catch (const json::exception& e) {
    parse_fail(e.what());
  } catch (const PositionedError&) {
    throw;
  } catch (const Error& e) {
    parse_fail(e.what());
  }
}

ProtocolParams read_params_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open parameter file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_params(buf.str());
}

void write_params_file(const std::string& path, const ProtocolParams& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write parameter file '" + path + "'");
  out << save_params(params);
  if (!out.flush()) throw Error(ErrorCode::kIoError, "write to '" + path + "' failed");
}

std::array<std::uint8_t, 8> params_digest(const ProtocolParams& params) {
  const std::string text = save_params(params);
  const auto full = sha256(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  std::array<std::uint8_t, 8> out{};
  std::copy_n(full.begin(), out.size(), out.begin());
  return out;
}

}  // namespace ot12
