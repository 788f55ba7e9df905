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

#include "ot12/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <thread>

#include "ot12/error.hpp"
#include "ot12/params.hpp"

namespace ot12 {

namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || bit_length(v) > 64) throw Error(ErrorCode::kOutOfRange, "value exceeds 64 bits");
  return static_cast<std::uint64_t>(mpz_get_ui(v.get_mpz_t()));
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) + b) % m);
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : m - (b - a);
}

// Distinct values of -c_{i,j}; a and b must avoid them.
std::size_t forbidden_count(const ProtocolParams& params) {
  std::vector<BigInt> values;
  for (const auto& row : params.matrix) {
    for (const auto& c : row) values.push_back(mod_neg(c, params.fp).value);
  }
  std::sort(values.begin(), values.end());
  return static_cast<std::size_t>(std::unique(values.begin(), values.end()) - values.begin());
}

DensityTrial run_density_trial(const DensityOptions& options, std::uint64_t seed,
                               const std::vector<BigInt>& factors) {
  Rng rng = Rng::seeded(seed);
  SetupOptions setup_options;
  setup_options.p = BigInt(static_cast<unsigned long>(options.p));
  setup_options.p_factors = factors;
  setup_options.q = kMinQ;
  setup_options.enforce_prime_floor = false;

  // Below the p > n^2 + 2 floor the matrix can block nearly every value;
  // redraw until two admissible values for a, b remain.
  ProtocolParams params = setup(options.n, rng, setup_options);
  while (static_cast<std::uint64_t>(forbidden_count(params)) + 2 > options.p) {
    params = setup(options.n, rng, setup_options);
  }

  AliceSecrets secrets =
      sample_alice_secrets(params, BitString::random(params.q, rng), BitString::random(params.q, rng), rng);
  const BitVector t = secrets.t;
  AliceSession alice = AliceSession::from_secrets(params, std::move(secrets));
  BobSession bob(params, rng);
  const Side choice = rng.bit() ? Side::kB : Side::kA;
  const RunResult run = execute(alice, bob, choice);

  const FieldElement g = sample_generator(params.fp, rng);
  const DlogOracle oracle(params.fp, g,
                          options.p < (1ULL << 20) ? DlogMethod::kExhaustive : DlogMethod::kBabyStepGiantStep);
  const SubsetCongruence inst = build_subset_congruence(run.transcript, oracle);

  DensityTrial trial;
  trial.seed = seed;
  trial.n = options.n;
  trial.p = options.p;
  trial.measured_count = count_congruence_solutions(inst);
  trial.planted_found = satisfies(inst, t);
  return trial;
}

}  // namespace

std::vector<std::uint64_t> factor_u64(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d != 0) continue;
    out.push_back(d);
    while (v % d == 0) v /= d;
  }
  if (v > 1) out.push_back(v);
  return out;
}

// --- discrete logarithms ----------------------------------------------------

DlogOracle::DlogOracle(FieldParams fp, FieldElement g, DlogMethod method)
    : fp_(std::move(fp)), g_(std::move(g)), method_(method) {
  const std::size_t bits = fp_.bit_length();
  const unsigned limit = method_ == DlogMethod::kExhaustive ? kMaxExhaustiveBits : kMaxBsgsBits;
  if (bits > limit) {
    throw Error(ErrorCode::kOutOfRange, "p has " + std::to_string(bits) + " bits; method budget is " +
                                            std::to_string(limit));
  }
  if (!is_generator(g_, fp_)) throw Error(ErrorCode::kPreconditionViolation, "dlog base is not a generator");
  p_ = to_u64(fp_.p);
  g64_ = to_u64(g_.value);

  if (method_ == DlogMethod::kBabyStepGiantStep) {
    const std::uint64_t order = p_ - 1;
    steps_ = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(order))));
    while (steps_ * steps_ < order) ++steps_;
    baby_.reserve(steps_);
    std::uint64_t cur = 1;
    for (std::uint64_t j = 0; j < steps_; ++j) {
      baby_.emplace(cur, j);
      cur = mul_mod(cur, g64_, p_);
    }
    // g^-m = g^(order - m mod order).
    giant_ = pow_mod(g64_, (order - steps_ % order) % order, p_);
  }
}

std::uint64_t DlogOracle::log(const FieldElement& y) const {
  if (y.value <= 0 || y.value >= fp_.p) {
    throw Error(ErrorCode::kPreconditionViolation, "dlog argument must be a nonzero field element");
  }
  const std::uint64_t v = to_u64(y.value);
  return method_ == DlogMethod::kExhaustive ? exhaustive(v) : bsgs(v);
}

std::uint64_t DlogOracle::exhaustive(std::uint64_t y) const {
  std::uint64_t cur = 1;
  for (std::uint64_t e = 0; e < p_ - 1; ++e) {
    if (cur == y) return e;
    cur = mul_mod(cur, g64_, p_);
  }
  throw Error(ErrorCode::kPreconditionViolation, "value outside the generated group");
}

std::uint64_t DlogOracle::bsgs(std::uint64_t y) const {
  std::uint64_t gamma = y;
  for (std::uint64_t i = 0; i < steps_; ++i) {
    if (auto it = baby_.find(gamma); it != baby_.end()) {
      return (i * steps_ + it->second) % (p_ - 1);
    }
    gamma = mul_mod(gamma, giant_, p_);
  }
  throw Error(ErrorCode::kPreconditionViolation, "value outside the generated group");
}

// --- the subset-sum congruence ------------------------------------------------

SubsetCongruence build_subset_congruence(const Transcript& transcript, const DlogOracle& oracle) {
  SubsetCongruence inst;
  inst.modulus = oracle.group_order();
  for (const auto& nu : transcript.r4.nu) inst.coeffs.push_back(oracle.log(nu));
  inst.target = oracle.log(transcript.r5.tau_b);
  return inst;
}

bool satisfies(const SubsetCongruence& inst, const BitVector& x) {
  if (x.size() != inst.coeffs.size()) return false;
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0) sum = add_mod(sum, inst.coeffs[i] % inst.modulus, inst.modulus);
  }
  return sum == inst.target % inst.modulus;
}

namespace {

// Visits every x in Gray-code order with the running sum kept incrementally.
template <typename Visit>
void for_each_solution_mask(const SubsetCongruence& inst, Visit visit) {
  const std::size_t n = inst.coeffs.size();
  if (n > kMaxCongruenceBits) {
    throw Error(ErrorCode::kBudgetExceeded, "exhaustive scan limited to n <= 24");
  }
  const std::uint64_t m = inst.modulus;
  const std::uint64_t target = inst.target % m;
  std::uint64_t sum = 0;
  std::uint64_t gray = 0;
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t k = 0; k < total; ++k) {
    if (k > 0) {
      const int flip = std::countr_zero(k);
      gray ^= 1ULL << flip;
      const std::uint64_t c = inst.coeffs[flip] % m;
      sum = (gray >> flip) & 1U ? add_mod(sum, c, m) : sub_mod(sum, c, m);
      if (sum == m) sum = 0;
    }
    if (sum == target) visit(gray);
  }
}

}  // namespace

std::vector<BitVector> enumerate_congruence_solutions(const SubsetCongruence& inst) {
  std::vector<std::uint64_t> masks;
  for_each_solution_mask(inst, [&](std::uint64_t mask) { masks.push_back(mask); });
  std::sort(masks.begin(), masks.end());
  std::vector<BitVector> out;
  out.reserve(masks.size());
  for (std::uint64_t mask : masks) {
    BitVector x(inst.coeffs.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (mask >> i) & 1U;
    out.push_back(std::move(x));
  }
  return out;
}

std::uint64_t count_congruence_solutions(const SubsetCongruence& inst) {
  std::uint64_t count = 0;
  for_each_solution_mask(inst, [&](std::uint64_t) { ++count; });
  return count;
}

DensityReport solution_density_experiment(const DensityOptions& options, Rng& rng) {
  if (options.n > 16) throw Error(ErrorCode::kBudgetExceeded, "density experiment limited to n <= 16");
  if (options.n < 2) throw Error(ErrorCode::kPreconditionViolation, "n must be at least 2");
  std::vector<BigInt> factors;
  for (std::uint64_t f : factor_u64(options.p - 1)) factors.emplace_back(static_cast<unsigned long>(f));
  // Rejects composite p before any work starts.
  make_field_params(BigInt(static_cast<unsigned long>(options.p)), factors);

  std::vector<std::uint64_t> seeds(options.trials);
  for (auto& s : seeds) s = rng.next_u64();

  DensityReport report;
  report.trials.resize(options.trials);
  std::size_t threads = options.threads != 0 ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, options.trials));

  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < options.trials; i += threads) {
          report.trials[i] = run_density_trial(options, seeds[i], factors);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  double total = 0;
  for (const auto& t : report.trials) total += static_cast<double>(t.measured_count);
  report.mean_count = options.trials == 0 ? 0.0 : total / static_cast<double>(options.trials);
  report.predicted = std::ldexp(1.0, static_cast<int>(options.n)) / static_cast<double>(options.p);
  return report;
}

void write_density_csv(std::ostream& out, const DensityReport& report) {
  out << "seed,n,p,measured_count,predicted\n";
  out << std::setprecision(6) << std::fixed;
  for (const auto& t : report.trials) {
    out << t.seed << ',' << t.n << ',' << t.p << ',' << t.measured_count << ',' << report.predicted << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

void write_density_summary(std::ostream& out, const DensityReport& report) {
  const auto planted = std::count_if(report.trials.begin(), report.trials.end(),
                                     [](const DensityTrial& t) { return t.planted_found; });
  const std::uint64_t min_count =
      report.trials.empty() ? 0
                            : std::min_element(report.trials.begin(), report.trials.end(),
                                               [](const auto& a, const auto& b) { return a.measured_count < b.measured_count; })
                                  ->measured_count;
  out << "trials:           " << report.trials.size() << '\n'
      << "mean solutions:   " << std::setprecision(4) << report.mean_count << '\n'
      << "predicted 2^n/p:  " << report.predicted << '\n'
      << "min solutions:    " << min_count << '\n'
      << "planted t found:  " << planted << '/' << report.trials.size() << '\n';
}

// --- the permuted subset-sum challenge ----------------------------------------

bool satisfies(const Challenge1Instance& inst, const BitVector& x, const Permutation& pi) {
  if (x.size() != inst.n || pi.size() != inst.n) return false;
  const std::uint64_t m = inst.modulus;
  for (std::size_t i = 0; i < inst.n; ++i) {
    std::uint64_t sum = pi(i + 1) % m;
    for (std::size_t j = 0; j < inst.n; ++j) {
      if (x[j] != 0) sum = add_mod(sum, inst.e[i][j] % m, m);
    }
    if (sum != inst.f[i] % m) return false;
  }
  return true;
}

std::optional<Challenge1Solution> challenge1_search(const Challenge1Instance& inst) {
  const std::size_t n = inst.n;
  if (n > kMaxChallenge1N) throw Error(ErrorCode::kBudgetExceeded, "challenge search limited to n <= 8");
  if (n == 0) return std::nullopt;
  const std::uint64_t m = inst.modulus;

  // residual[i] = f_i - sum_j x_j e_{i,j}; a permutation must match it row by row.
  std::vector<std::uint64_t> residual(n);
  std::vector<std::uint32_t> images(n);
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t sum = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if ((mask >> j) & 1U) sum = add_mod(sum, inst.e[i][j] % m, m);
      }
      residual[i] = sub_mod(inst.f[i] % m, sum, m);
    }
    std::iota(images.begin(), images.end(), 1U);
    do {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) ok = images[i] % m == residual[i];
      if (ok) {
        BitVector x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j) & 1U;
        return Challenge1Solution{std::move(x), Permutation::from_images(images)};
      }
    } while (std::next_permutation(images.begin(), images.end()));
  }
  return std::nullopt;
}

bool challenge1_decide(const Challenge1Instance& inst) { return challenge1_search(inst).has_value(); }

Challenge1Instance random_challenge1(std::size_t n, std::uint64_t modulus, Rng& rng) {
  if (n < 1 || modulus < 1) throw Error(ErrorCode::kPreconditionViolation, "need n >= 1 and modulus >= 1");
  Challenge1Instance inst;
  inst.n = n;
  inst.modulus = modulus;
  inst.e.assign(n, std::vector<std::uint64_t>(n));
  for (auto& row : inst.e) {
    for (auto& v : row) v = rng.uniform_below(modulus);
  }
  inst.f.resize(n);
  for (auto& v : inst.f) v = rng.uniform_below(modulus);
  return inst;
}

std::pair<Challenge1Instance, Challenge1Solution> plant_challenge1(std::size_t n, std::uint64_t modulus,
                                                                   Rng& rng) {
  Challenge1Instance inst = random_challenge1(n, modulus, rng);
  Challenge1Solution planted{random_bits(n, rng), sample_permutation(n, rng)};
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t sum = planted.pi(i + 1) % modulus;
    for (std::size_t j = 0; j < n; ++j) {
      if (planted.x[j] != 0) sum = add_mod(sum, inst.e[i][j], modulus);
    }
    inst.f[i] = sum;
  }
  return {std::move(inst), std::move(planted)};
}

FieldElement recover_alpha_power(const Transcript& transcript, const FieldParams& fp, const FieldElement& f_d) {
  const FieldElement& tau = transcript.choice == Side::kA ? transcript.r2.tau_a : transcript.r2.tau_b;
  return mod_mul(tau, mod_inv(f_d, fp), fp);
}

}  // namespace ot12
