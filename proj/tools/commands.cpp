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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "ot12/analysis.hpp"
#include "ot12/error.hpp"
#include "ot12/hashing.hpp"
#include "ot12/params.hpp"
#include "ot12/transport.hpp"

namespace ot12::cli {

namespace {

using Clock = std::chrono::steady_clock;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Records when each frame leaves, relative to construction.
class TimingChannel : public Channel {
 public:
  explicit TimingChannel(Channel& inner) : inner_(inner), start_(Clock::now()) {}
  void send_frame(const Frame& frame) override {
    inner_.send_frame(frame);
    sent_.emplace_back(frame.tag, Clock::now() - start_);
  }
  Frame recv_frame(std::chrono::milliseconds timeout) override { return inner_.recv_frame(timeout); }
  void close() override { inner_.close(); }

  const std::vector<std::pair<std::uint8_t, Clock::duration>>& sent() const { return sent_; }

 private:
  Channel& inner_;
  Clock::time_point start_;
  std::vector<std::pair<std::uint8_t, Clock::duration>> sent_;
};

double to_ms(Clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); }

char side_letter(Side s) { return s == Side::kA ? 'a' : 'b'; }

std::string hex_of(std::span<const std::uint8_t> bytes) { return to_hex(bytes); }

// Loads and validates a parameter file.
ProtocolParams load_checked(const std::string& path) {
  ProtocolParams params = read_params_file(path);
  const auto problems = validate(params);
  if (!problems.empty()) {
    std::string text = "parameter file '" + path + "' is invalid:";
    for (const auto& v : problems) text += " " + std::string(to_string(v.kind));
    throw UsageError(text);
  }
  return params;
}

BitString message_or_random(const std::optional<std::string>& hex, std::size_t q, Rng& rng) {
  return hex ? parse_message(*hex, q) : BitString::random(q, rng);
}

void print_counters(std::ostream& out, const char* who, const CostCounters& c) {
  out << "h1 " << who << ": " << c.h1_calls << '\n' << "h2 " << who << ": " << c.h2_calls << '\n';
}

template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitProtocolFailure;
  }
}

Endpoint endpoint_or_usage(const std::string& text) {
  try {
    return parse_endpoint(text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// Retries refused connections until the deadline so Bob may start first.
std::unique_ptr<Channel> connect_with_retry(const Endpoint& where, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    try {
      return tcp_connect(where, std::max(left, std::chrono::milliseconds(1)));
    } catch (const Error& e) {
      if (Clock::now() + std::chrono::milliseconds(100) >= deadline) throw;
      if (e.code() != ErrorCode::kIoError && e.code() != ErrorCode::kConnectionClosed) throw;
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  }
}

std::vector<BigInt> factors_of(std::uint64_t v) {
  std::vector<BigInt> out;
  for (std::uint64_t f : factor_u64(v)) out.emplace_back(static_cast<unsigned long>(f));
  return out;
}

}  // namespace

BitString parse_message(const std::string& hex, std::size_t q) {
  const std::size_t digits = (q + 3) / 4;
  if (hex.size() != digits) {
    throw UsageError("message must be " + std::to_string(digits) + " hex digits, got " +
                     std::to_string(hex.size()));
  }
  BitString full;
  try {
    full = BitString::from_hex(hex);
  } catch (const Error& e) {
    throw UsageError(std::string("message: ") + e.what());
  }
  const std::size_t spare = digits * 4 - q;
  const BigInt v = full.to_integer();
  if (spare > 0 && (v & ((BigInt(1) << spare) - 1)) != 0) {
    throw UsageError("message has bits set beyond q = " + std::to_string(q));
  }
  return BitString::from_integer(BigInt(v >> spare), q);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError:
    case ErrorCode::kTimeout:
    case ErrorCode::kConnectionClosed:
      return kExitIo;
    case ErrorCode::kPreconditionViolation:
    case ErrorCode::kInvalidOverride:
    case ErrorCode::kParseError:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kBudgetExceeded:
      return kExitUsage;
    default:
      return kExitProtocolFailure;
  }
}

int cmd_setup(const SetupArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.n < 2) throw UsageError("--n must be at least 2");
    if (args.out.empty()) throw UsageError("--out is required");
    SetupOptions options;
    if (args.p) {
      try {
        options.p = BigInt(*args.p, 10);
      } catch (const std::invalid_argument&) {
        throw UsageError("--p must be a decimal integer");
      }
    }
    options.q = args.q;
    Rng rng = Rng::from_optional_seed(args.seed);
    const ProtocolParams params = setup(args.n, rng, options);
    write_params_file(args.out, params);
    out << "wrote " << args.out << '\n'
        << "n: " << params.n << '\n'
        << "p: " << params.fp.p.get_str() << '\n'
        << "bitlen(p): " << params.fp.bit_length() << '\n'
        << "q: " << params.q << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_alice(const AliceArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Endpoint where = endpoint_or_usage(args.listen);
    ProtocolParams params = load_checked(args.params);
    Rng rng = Rng::from_optional_seed(args.seed);
    BitString m_a = message_or_random(args.m_a, params.q, rng);
    BitString m_b = message_or_random(args.m_b, params.q, rng);
    AliceSession alice(std::move(params), std::move(m_a), std::move(m_b), rng);

    TcpListener listener(where);
    out << "listening on " << where.host << ':' << listener.port() << std::endl;
    auto channel = listener.accept(args.timeout);
    TimingChannel timed(*channel);
    run_alice(alice, timed, EndpointOptions{args.timeout});
    channel->close();

    for (const auto& [tag, at] : timed.sent()) {
      if (tag == kHelloTag) continue;
      out << "round " << int(tag) << " sent at " << std::fixed << std::setprecision(3) << to_ms(at) << " ms\n";
    }
    out.unsetf(std::ios::floatfield);
    print_counters(out, "alice", alice.counters());
    return static_cast<int>(kExitOk);
  });
}

int cmd_bob(const BobArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Endpoint where = endpoint_or_usage(args.connect);
    ProtocolParams params = load_checked(args.params);
    Rng rng = Rng::from_optional_seed(args.seed);
    BobSession bob(params, rng);

    auto channel = connect_with_retry(where, args.timeout);
    const BobOutcome outcome = run_bob(bob, *channel, args.choice, EndpointOptions{args.timeout});
    channel->close();

    if (h2(outcome.recovered, params.h2) != bob.chosen_commitment()) {
      throw Error(ErrorCode::kRecoveryFailed, "recovered message does not match the commitment");
    }
    out << "choice: " << side_letter(args.choice) << '\n'
        << "recovered: " << outcome.recovered.to_hex() << '\n'
        << "commitment verified\n";
    print_counters(out, "bob", bob.counters());
    return static_cast<int>(kExitOk);
  });
}

int cmd_demo(const DemoArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!args.params && args.n < 2) throw UsageError("--n must be at least 2");
    Rng rng = Rng::from_optional_seed(args.seed);
    ProtocolParams params = args.params ? load_checked(*args.params) : setup(args.n, rng);
    BitString m_a = message_or_random(args.m_a, params.q, rng);
    BitString m_b = message_or_random(args.m_b, params.q, rng);
    const BitString expected = args.choice == Side::kA ? m_a : m_b;

    AliceSession alice(params, m_a, m_b, rng);
    BobSession bob(params, rng);
    const ProtocolRun run = args.tcp ? run_protocol_tcp_loopback(alice, bob, args.choice)
                                     : run_protocol_in_process(alice, bob, args.choice);
    const bool ok = run.recovered == expected && h2(run.recovered, params.h2) == bob.chosen_commitment();

    const std::size_t k = mask_count(params.n);
    out << "n: " << params.n << '\n'
        << "p: " << params.fp.p.get_str() << '\n'
        << "q: " << params.q << '\n'
        << "K: " << k << '\n'
        << "choice: " << side_letter(args.choice) << '\n'
        << "m_a: " << m_a.to_hex() << '\n'
        << "m_b: " << m_b.to_hex() << '\n'
        << "frames: " << run.frames.size() << '\n'
        << "transcript digest: " << hex_of(transcript_digest(run.frames)) << '\n'
        << "recovered: " << run.recovered.to_hex() << '\n';
    print_counters(out, "alice", alice.counters());
    print_counters(out, "bob", bob.counters());
    out << "h1 total: " << alice.counters().h1_calls + bob.counters().h1_calls << " (bound 2K + K = " << 3 * k
        << ")\n"
        << "h2 total: " << alice.counters().h2_calls + bob.counters().h2_calls << " (bound K^2 + 2 = " << k * k + 2
        << ")\n";
    if (!ok) {
      err << "error: recovered message differs from m_" << side_letter(args.choice) << '\n';
      return static_cast<int>(kExitProtocolFailure);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_analyze_density(const DensityArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.n < 2 || args.n > 16) throw UsageError("--n must be in [2, 16]");
    if (args.p < 3) throw UsageError("--p must be an odd prime");
    Rng rng = Rng::from_optional_seed(args.seed);
    const DensityReport report = solution_density_experiment(
        DensityOptions{args.n, args.p, args.trials, args.threads}, rng);
    if (args.out) {
      std::ofstream file(*args.out, std::ios::trunc);
      if (!file) throw Error(ErrorCode::kIoError, "cannot write '" + *args.out + "'");
      write_density_csv(file, report);
      if (!file.flush()) throw Error(ErrorCode::kIoError, "write to '" + *args.out + "' failed");
    } else {
      write_density_csv(out, report);
      out << '\n';
    }
    write_density_summary(out, report);
    return static_cast<int>(kExitOk);
  });
}

int cmd_analyze_challenge1(const Challenge1Args& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.n < 1 || args.n > kMaxChallenge1N) throw UsageError("--n must be in [1, 8]");
    if (args.p < 3) throw UsageError("--p must be at least 3");
    Rng rng = Rng::from_optional_seed(args.seed);
    const std::uint64_t modulus = args.p - 1;
    std::optional<Challenge1Solution> planted;
    Challenge1Instance inst;
    if (args.plant) {
      auto [i, s] = plant_challenge1(args.n, modulus, rng);
      inst = std::move(i);
      planted = std::move(s);
    } else {
      inst = random_challenge1(args.n, modulus, rng);
    }

    out << "n: " << inst.n << '\n' << "modulus: " << inst.modulus << '\n';
    for (std::size_t i = 0; i < inst.n; ++i) {
      out << "row " << i + 1 << ":";
      for (auto v : inst.e[i]) out << ' ' << v;
      out << " | f = " << inst.f[i] << '\n';
    }
    const auto found = challenge1_search(inst);
    if (!found) {
      out << "solution: none\n";
      return static_cast<int>(planted ? kExitProtocolFailure : kExitOk);
    }
    out << "solution x:";
    for (auto b : found->x) out << ' ' << int(b);
    out << "\nsolution pi:";
    for (auto v : found->pi.images()) out << ' ' << v;
    out << '\n';
    if (!satisfies(inst, found->x, found->pi)) {
      err << "error: returned pair does not satisfy the instance\n";
      return static_cast<int>(kExitProtocolFailure);
    }
    if (planted) {
      const bool same = found->x == planted->x && found->pi.images() == planted->pi.images();
      out << "planted pair " << (same ? "recovered" : "differs; returned pair also satisfies") << '\n';
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_analyze_dlog_check(const DlogCheckArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.p < 3) throw UsageError("--p must be an odd prime");
    const FieldParams fp = make_field_params(BigInt(static_cast<unsigned long>(args.p)), factors_of(args.p - 1));
    Rng rng = Rng::from_optional_seed(args.seed);
    const FieldElement g = sample_generator(fp, rng);
    const DlogOracle exhaustive(fp, g, DlogMethod::kExhaustive);
    const DlogOracle bsgs(fp, g, DlogMethod::kBabyStepGiantStep);
    std::uint64_t mismatches = 0;
    for (std::uint64_t y = 1; y < args.p; ++y) {
      const FieldElement e(static_cast<unsigned long>(y));
      const std::uint64_t a = exhaustive.log(e);
      const std::uint64_t b = bsgs.log(e);
      if (a != b || mod_pow(g, BigInt(static_cast<unsigned long>(b)), fp) != e) ++mismatches;
    }
    out << "p: " << args.p << '\n'
        << "g: " << g.value.get_str() << '\n'
        << "checked: " << args.p - 1 << '\n'
        << "mismatches: " << mismatches << '\n';
    return static_cast<int>(mismatches == 0 ? kExitOk : kExitProtocolFailure);
  });
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-party oblivious transfer over F_p: parameters, endpoints, demo and analysis", "ot12"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::string> params_path;
  double timeout_secs = 30;
  auto add_common = [&](CLI::App* sub, bool with_params) {
    sub->add_option("--seed", seed, "64-bit seed for a deterministic run");
    sub->add_option("--timeout", timeout_secs, "Per-frame timeout in seconds")->check(CLI::PositiveNumber);
    if (with_params) sub->add_option("--params", params_path, "Parameter file");
  };
  auto choice_validator = CLI::IsMember({"a", "b"});
  std::string choice = "a";

  SetupArgs setup_args;
  auto* setup_cmd = app.add_subcommand("setup", "Generate a parameter file");
  setup_cmd->add_option("--n", setup_args.n, "Number of secret bits per party")->required();
  setup_cmd->add_option("--out", setup_args.out, "Output path")->required();
  setup_cmd->add_option("--p", setup_args.p, "Prime override (decimal)");
  setup_cmd->add_option("--q", setup_args.q, "Message length in bits");
  add_common(setup_cmd, false);

  AliceArgs alice_args;
  auto* alice_cmd = app.add_subcommand("alice", "Serve one run as the sender");
  alice_cmd->add_option("--m-a", alice_args.m_a, "Message a (hex)");
  alice_cmd->add_option("--m-b", alice_args.m_b, "Message b (hex)");
  alice_cmd->add_option("--listen", alice_args.listen, "HOST:PORT to listen on");
  add_common(alice_cmd, true);

  BobArgs bob_args;
  auto* bob_cmd = app.add_subcommand("bob", "Connect to a sender and receive one message");
  bob_cmd->add_option("--choice", choice, "Which message to receive")->check(choice_validator);
  bob_cmd->add_option("--connect", bob_args.connect, "HOST:PORT of the sender");
  add_common(bob_cmd, true);

  DemoArgs demo_args;
  auto* demo_cmd = app.add_subcommand("demo", "Run both parties in one process");
  demo_cmd->add_option("--n", demo_args.n, "Number of secret bits per party");
  demo_cmd->add_option("--choice", choice, "Which message Bob receives")->check(choice_validator);
  demo_cmd->add_option("--m-a", demo_args.m_a, "Message a (hex)");
  demo_cmd->add_option("--m-b", demo_args.m_b, "Message b (hex)");
  demo_cmd->add_flag("--tcp", demo_args.tcp, "Use a loopback TCP connection");
  add_common(demo_cmd, true);

  auto* analyze_cmd = app.add_subcommand("analyze", "Cryptanalysis experiments");
  analyze_cmd->require_subcommand(1);

  DensityArgs density_args;
  auto* density_cmd = analyze_cmd->add_subcommand("density", "Count solutions of the receiver-side congruence");
  density_cmd->add_option("--n", density_args.n, "Bits per party");
  density_cmd->add_option("--p", density_args.p, "Prime modulus");
  density_cmd->add_option("--trials", density_args.trials, "Number of transcripts");
  density_cmd->add_option("--threads", density_args.threads, "Worker threads (0 = all cores)");
  density_cmd->add_option("--out", density_args.out, "CSV output path");
  add_common(density_cmd, false);

  Challenge1Args challenge_args;
  auto* challenge_cmd = analyze_cmd->add_subcommand("challenge1", "Brute-force the permuted subset-sum problem");
  challenge_cmd->add_option("--n", challenge_args.n, "Instance size");
  challenge_cmd->add_option("--p", challenge_args.p, "Instances live mod p - 1");
  challenge_cmd->add_flag("--plant", challenge_args.plant, "Plant a known solution");
  add_common(challenge_cmd, false);

  DlogCheckArgs dlog_args;
  auto* dlog_cmd = analyze_cmd->add_subcommand("dlog-check", "Cross-check BSGS against exhaustive search");
  dlog_cmd->add_option("--p", dlog_args.p, "Prime modulus");
  add_common(dlog_cmd, false);

  std::vector<std::string> reversed(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitUsage);
  }

  const auto timeout = std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(timeout_secs * 1000)));
  const Side side = choice == "b" ? Side::kB : Side::kA;

  if (setup_cmd->parsed()) {
    setup_args.seed = seed;
    return cmd_setup(setup_args, out, err);
  }
  if (alice_cmd->parsed()) {
    if (!params_path) return err << "error: --params is required\n", static_cast<int>(kExitUsage);
    alice_args.params = *params_path;
    alice_args.seed = seed;
    alice_args.timeout = timeout;
    return cmd_alice(alice_args, out, err);
  }
  if (bob_cmd->parsed()) {
    if (!params_path) return err << "error: --params is required\n", static_cast<int>(kExitUsage);
    bob_args.params = *params_path;
    bob_args.choice = side;
    bob_args.seed = seed;
    bob_args.timeout = timeout;
    return cmd_bob(bob_args, out, err);
  }
  if (demo_cmd->parsed()) {
    demo_args.params = params_path;
    demo_args.choice = side;
    demo_args.seed = seed;
    return cmd_demo(demo_args, out, err);
  }
  if (density_cmd->parsed()) {
    density_args.seed = seed;
    return cmd_analyze_density(density_args, out, err);
  }
  if (challenge_cmd->parsed()) {
    challenge_args.seed = seed;
    return cmd_analyze_challenge1(challenge_args, out, err);
  }
  dlog_args.seed = seed;
  return cmd_analyze_dlog_check(dlog_args, out, err);
}

}  // namespace ot12::cli
