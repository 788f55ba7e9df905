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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ot12/error.hpp"
#include "ot12/protocol.hpp"

namespace ot12::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitProtocolFailure = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

struct SetupArgs {
  std::size_t n = 0;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> p;
  std::optional<std::size_t> q;
};

struct AliceArgs {
  std::string params;
  // Hex, ceil(q/4) digits. Random when absent.
  std::optional<std::string> m_a;
  std::optional<std::string> m_b;
  std::string listen = "127.0.0.1:7512";
  std::optional<std::uint64_t> seed;
  std::chrono::milliseconds timeout{30000};
};

struct BobArgs {
  std::string params;
  Side choice = Side::kA;
  std::string connect = "127.0.0.1:7512";
  std::optional<std::uint64_t> seed;
  std::chrono::milliseconds timeout{30000};
};

struct DemoArgs {
  std::size_t n = 4;
  std::optional<std::uint64_t> seed;
  Side choice = Side::kA;
  // Loaded instead of generated when set.
  std::optional<std::string> params;
  std::optional<std::string> m_a;
  std::optional<std::string> m_b;
  bool tcp = false;
};

struct DensityArgs {
  std::size_t n = 8;
  std::uint64_t p = 31;
  std::size_t trials = 50;
  std::size_t threads = 0;
  std::optional<std::uint64_t> seed;
  // CSV goes here when set, else to stdout before the summary.
  std::optional<std::string> out;
};

struct Challenge1Args {
  std::size_t n = 4;
  // Instances live mod p - 1.
  std::uint64_t p = 1009;
  bool plant = false;
  std::optional<std::uint64_t> seed;
};

struct DlogCheckArgs {
  std::uint64_t p = 10007;
  std::optional<std::uint64_t> seed;
};

int cmd_setup(const SetupArgs& args, std::ostream& out, std::ostream& err);
int cmd_alice(const AliceArgs& args, std::ostream& out, std::ostream& err);
int cmd_bob(const BobArgs& args, std::ostream& out, std::ostream& err);
int cmd_demo(const DemoArgs& args, std::ostream& out, std::ostream& err);
int cmd_analyze_density(const DensityArgs& args, std::ostream& out, std::ostream& err);
int cmd_analyze_challenge1(const Challenge1Args& args, std::ostream& out, std::ostream& err);
int cmd_analyze_dlog_check(const DlogCheckArgs& args, std::ostream& out, std::ostream& err);

// Parses argv (program name first) and dispatches.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

// Hex message of exactly ceil(q/4) digits; unused low bits of the last digit must be zero.
BitString parse_message(const std::string& hex, std::size_t q);

// Maps a library error to an exit code.
int exit_code_for(ErrorCode code);

}  // namespace ot12::cli
