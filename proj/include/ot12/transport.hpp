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

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ot12/error.hpp"
#include "ot12/params.hpp"
#include "ot12/protocol.hpp"

namespace ot12 {

inline constexpr std::uint8_t kHelloTag = 0x00;
inline constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::uint16_t kDefaultPort = 7512;
inline constexpr std::size_t kFrameHeaderBytes = 5;
inline constexpr std::uint32_t kMaxPayloadBytes = 64U << 20;
inline constexpr std::chrono::milliseconds kDefaultTimeout{30000};

// On the wire: u32 big-endian payload length, 1-byte tag, payload.
struct Frame {
  std::uint8_t tag = 0;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

std::vector<std::uint8_t> serialize_frame(const Frame& frame);
// Exactly one frame. Throws PositionedError(kMalformedMessage).
Frame parse_frame(std::span<const std::uint8_t> bytes);

// Expected payload size for round 1..5 under `params`.
std::size_t payload_size(int round, const ProtocolParams& params);

Frame encode_message(const RoundMessage& msg, const ProtocolParams& params);
// kTagMismatch for tags outside 1..5; PositionedError(kMalformedMessage) for
// payloads of the wrong size or with out-of-range contents.
RoundMessage decode_message(const Frame& frame, const ProtocolParams& params);

// Decodes and requires the given message type, else kTagMismatch.
template <typename Message>
Message decode_as(const Frame& frame, const ProtocolParams& params) {
  RoundMessage msg = decode_message(frame, params);
  if (auto* m = std::get_if<Message>(&msg)) return std::move(*m);
  throw Error(ErrorCode::kTagMismatch, "unexpected round " + std::to_string(round_of(msg)));
}

// Hello frame: version byte followed by the 8-byte parameter digest.
Frame make_hello(const ProtocolParams& params);
// kTagMismatch / kMalformedMessage / kDigestMismatch.
void check_hello(const Frame& frame, const ProtocolParams& params);

// Blocking, ordered, duplex frame stream.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send_frame(const Frame& frame) = 0;
  // kTimeout when nothing arrives in time, kConnectionClosed when the peer is gone.
  virtual Frame recv_frame(std::chrono::milliseconds timeout) = 0;
  virtual void close() = 0;
};

struct ChannelPair {
  std::unique_ptr<Channel> alice;
  std::unique_ptr<Channel> bob;
};

// Two connected in-memory endpoints. Frames cross as serialized bytes.
ChannelPair make_in_process_pair();

// Appends every frame sent or received through `inner` to `log`.
class RecordingChannel : public Channel {
 public:
  RecordingChannel(Channel& inner, std::vector<Frame>& log) : inner_(inner), log_(log) {}
  void send_frame(const Frame& frame) override;
  Frame recv_frame(std::chrono::milliseconds timeout) override;
  void close() override { inner_.close(); }

 private:
  Channel& inner_;
  std::vector<Frame>& log_;
};

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = kDefaultPort;
};

// "host:port"; throws kParseError.
Endpoint parse_endpoint(const std::string& text);

class TcpListener {
 public:
  explicit TcpListener(const Endpoint& where);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  // Actual bound port (useful with port 0).
  std::uint16_t port() const noexcept { return port_; }
  std::unique_ptr<Channel> accept(std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

std::unique_ptr<Channel> tcp_connect(const Endpoint& where, std::chrono::milliseconds timeout);

struct EndpointOptions {
  std::chrono::milliseconds timeout = kDefaultTimeout;
};

// Sender side of one run: hello exchange, then rounds 1, 3, 5.
void run_alice(AliceSession& alice, Channel& channel, const EndpointOptions& options = {});

struct BobOutcome {
  Transcript transcript;
  BitString recovered;
};

// Receiver side of one run: hello exchange, rounds 2, 4, recovery.
BobOutcome run_bob(BobSession& bob, Channel& channel, Side choice, const EndpointOptions& options = {});

struct ProtocolRun {
  // Every frame in exchange order, hellos included.
  std::vector<Frame> frames;
  Transcript transcript;
  BitString recovered;
};

// Runs Alice on a worker thread and Bob on the calling thread.
ProtocolRun run_protocol(AliceSession& alice, BobSession& bob, Channel& alice_end, Channel& bob_end,
                         Side choice, const EndpointOptions& options = {});
ProtocolRun run_protocol_in_process(AliceSession& alice, BobSession& bob, Side choice,
                                    const EndpointOptions& options = {});
ProtocolRun run_protocol_tcp_loopback(AliceSession& alice, BobSession& bob, Side choice,
                                      const EndpointOptions& options = {});

// SHA-256 over the concatenated serialized frames.
std::array<std::uint8_t, 32> transcript_digest(const std::vector<Frame>& frames);

}  // namespace ot12
