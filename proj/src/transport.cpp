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

#include "ot12/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

#include "ot12/error.hpp"
#include "ot12/hashing.hpp"

namespace ot12 {

namespace {

std::size_t bytes_for_bits(std::size_t bits) { return (bits + 7) / 8; }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in) {
  return (std::uint32_t{in[0]} << 24) | (std::uint32_t{in[1]} << 16) | (std::uint32_t{in[2]} << 8) |
         std::uint32_t{in[3]};
}

void append_bits(std::vector<std::uint8_t>& out, const BitString& s, std::size_t expected_bits) {
  if (s.bit_length() != expected_bits) {
    throw Error(ErrorCode::kMalformedMessage, "bit string has " + std::to_string(s.bit_length()) +
                                                  " bits, expected " + std::to_string(expected_bits));
  }
  out.insert(out.end(), s.bytes().begin(), s.bytes().end());
}

void append_elements(std::vector<std::uint8_t>& out, const std::vector<FieldElement>& xs,
                     std::size_t expected, const FieldParams& fp) {
  if (xs.size() != expected) {
    throw Error(ErrorCode::kMalformedMessage, "vector has " + std::to_string(xs.size()) +
                                                  " elements, expected " + std::to_string(expected));
  }
  for (const auto& x : xs) append_element(out, x, fp);
}

class PayloadReader {
 public:
  explicit PayloadReader(std::span<const std::uint8_t> data) : data_(data) {}

  FieldElement element(const FieldParams& fp) {
    const std::size_t at = pos_;
    auto bytes = take(fp.elem_width_bytes);
    FieldElement x(bytes_to_bigint(bytes));
    if (x.value >= fp.p) throw PositionedError(ErrorCode::kMalformedMessage, at, "field element not below p");
    return x;
  }

  std::vector<FieldElement> elements(std::size_t count, const FieldParams& fp) {
    std::vector<FieldElement> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(element(fp));
    return out;
  }

  BitString bits(std::size_t nbits) {
    const std::size_t at = pos_;
    auto bytes = take(bytes_for_bits(nbits));
    BitString s = BitString::from_bytes(bytes, nbits);
    if (!std::equal(bytes.begin(), bytes.end(), s.bytes().begin())) {
      throw PositionedError(ErrorCode::kMalformedMessage, at + bytes.size() - 1, "nonzero padding bits");
    }
    return s;
  }

  std::vector<BitString> bit_list(std::size_t count, std::size_t nbits) {
    std::vector<BitString> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(bits(nbits));
    return out;
  }

  void finish() const {
    if (pos_ != data_.size()) throw PositionedError(ErrorCode::kMalformedMessage, pos_, "trailing bytes");
  }

 private:
  std::span<const std::uint8_t> take(std::size_t count) {
    if (data_.size() - pos_ < count) {
      throw PositionedError(ErrorCode::kMalformedMessage, data_.size(), "payload truncated");
    }
    auto out = data_.subspan(pos_, count);
    pos_ += count;
    return out;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

// --- in-process channel ---------------------------------------------------

struct Pipe {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::vector<std::uint8_t>> queue;
  bool closed = false;
};

class InProcessChannel : public Channel {
 public:
  InProcessChannel(std::shared_ptr<Pipe> in, std::shared_ptr<Pipe> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  ~InProcessChannel() override { close(); }

  void send_frame(const Frame& frame) override {
    auto bytes = serialize_frame(frame);
    std::lock_guard lock(out_->mu);
    if (out_->closed) throw Error(ErrorCode::kConnectionClosed, "peer closed the channel");
    out_->queue.push_back(std::move(bytes));
    out_->cv.notify_all();
  }

  Frame recv_frame(std::chrono::milliseconds timeout) override {
    std::unique_lock lock(in_->mu);
    if (!in_->cv.wait_for(lock, timeout, [&] { return !in_->queue.empty() || in_->closed; })) {
      throw Error(ErrorCode::kTimeout, "no frame within " + std::to_string(timeout.count()) + " ms");
    }
    if (in_->queue.empty()) throw Error(ErrorCode::kConnectionClosed, "peer closed the channel");
    auto bytes = std::move(in_->queue.front());
    in_->queue.pop_front();
    return parse_frame(bytes);
  }

  void close() override {
    for (const auto& pipe : {in_, out_}) {
      std::lock_guard lock(pipe->mu);
      pipe->closed = true;
      pipe->cv.notify_all();
    }
  }

 private:
  std::shared_ptr<Pipe> in_;
  std::shared_ptr<Pipe> out_;
};

// --- TCP -------------------------------------------------------------------

[[noreturn]] void throw_errno(const std::string& what) {
  throw Error(ErrorCode::kIoError, what + ": " + std::strerror(errno));
}

// Waits for `events` on fd until `deadline`; false on timeout.
bool wait_fd(int fd, short events, std::chrono::steady_clock::time_point deadline) {
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return false;
    pollfd pfd{fd, events, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
    if (rc > 0) return true;
    if (rc == 0) return false;
    if (errno != EINTR) throw_errno("poll");
  }
}

class TcpChannel : public Channel {
 public:
  explicit TcpChannel(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  ~TcpChannel() override { close(); }

  void send_frame(const Frame& frame) override {
    if (fd_ < 0) throw Error(ErrorCode::kConnectionClosed, "channel closed");
    const auto bytes = serialize_frame(frame);
    std::size_t sent = 0;
    while (sent < bytes.size()) {
      const ssize_t rc = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
      if (rc < 0) {
        if (errno == EINTR) continue;
        if (errno == EPIPE || errno == ECONNRESET) throw Error(ErrorCode::kConnectionClosed, "peer closed the connection");
        throw_errno("send");
      }
      sent += static_cast<std::size_t>(rc);
    }
  }

  Frame recv_frame(std::chrono::milliseconds timeout) override {
    if (fd_ < 0) throw Error(ErrorCode::kConnectionClosed, "channel closed");
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    std::vector<std::uint8_t> bytes(kFrameHeaderBytes);
    read_exact(bytes.data(), kFrameHeaderBytes, deadline, timeout);
    const std::uint32_t length = get_u32(bytes);
    if (length > kMaxPayloadBytes) {
      throw PositionedError(ErrorCode::kMalformedMessage, 0, "frame length " + std::to_string(length) + " too large");
    }
    bytes.resize(kFrameHeaderBytes + length);
    read_exact(bytes.data() + kFrameHeaderBytes, length, deadline, timeout);
    return parse_frame(bytes);
  }

  void close() override {
    if (fd_ >= 0) {
      ::shutdown(fd_, SHUT_RDWR);
      ::close(fd_);
      fd_ = -1;
    }
  }

 private:
  void read_exact(std::uint8_t* out, std::size_t count, std::chrono::steady_clock::time_point deadline,
                  std::chrono::milliseconds timeout) {
    std::size_t got = 0;
    while (got < count) {
      if (!wait_fd(fd_, POLLIN, deadline)) {
        throw Error(ErrorCode::kTimeout, "no frame within " + std::to_string(timeout.count()) + " ms");
      }
      const ssize_t rc = ::recv(fd_, out + got, count - got, 0);
      if (rc == 0) throw Error(ErrorCode::kConnectionClosed, "peer closed the connection");
      if (rc < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        if (errno == ECONNRESET) throw Error(ErrorCode::kConnectionClosed, "connection reset by peer");
        throw_errno("recv");
      }
      got += static_cast<std::size_t>(rc);
    }
  }

  int fd_;
};

struct AddrInfoDeleter {
  void operator()(addrinfo* ai) const { ::freeaddrinfo(ai); }
};

std::unique_ptr<addrinfo, AddrInfoDeleter> resolve(const Endpoint& where, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(where.port);
  const int rc = ::getaddrinfo(where.host.c_str(), port.c_str(), &hints, &res);
  if (rc != 0) throw Error(ErrorCode::kIoError, "cannot resolve '" + where.host + "': " + ::gai_strerror(rc));
  return std::unique_ptr<addrinfo, AddrInfoDeleter>(res);
}

}  // namespace

std::vector<std::uint8_t> serialize_frame(const Frame& frame) {
  if (frame.payload.size() > kMaxPayloadBytes) {
    throw Error(ErrorCode::kMalformedMessage, "payload too large for a frame");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + frame.payload.size());
  put_u32(out, static_cast<std::uint32_t>(frame.payload.size()));
  out.push_back(frame.tag);
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

Frame parse_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderBytes) {
    throw PositionedError(ErrorCode::kMalformedMessage, bytes.size(), "frame header truncated");
  }
  const std::uint32_t length = get_u32(bytes);
  if (bytes.size() - kFrameHeaderBytes != length) {
    throw PositionedError(ErrorCode::kMalformedMessage, 0,
                          "frame declares " + std::to_string(length) + " payload bytes, has " +
                              std::to_string(bytes.size() - kFrameHeaderBytes));
  }
  Frame f;
  f.tag = bytes[4];
  f.payload.assign(bytes.begin() + kFrameHeaderBytes, bytes.end());
  return f;
}

std::size_t payload_size(int round, const ProtocolParams& params) {
  const std::size_t w = params.fp.elem_width_bytes;
  const std::size_t n = params.n;
  switch (round) {
    case 1: return 2 * n * w;
    case 2: return 2 * w;
    case 3:
      return 2 * mask_count(n) * bytes_for_bits(params.q) + 2 * w + 2 * bytes_for_bits(params.h2.qprime);
    case 4: return n * w;
    case 5: return w;
    default: throw Error(ErrorCode::kTagMismatch, "no round " + std::to_string(round));
  }
}

Frame encode_message(const RoundMessage& msg, const ProtocolParams& params) {
  const FieldParams& fp = params.fp;
  const std::size_t n = params.n;
  Frame frame;
  frame.tag = static_cast<std::uint8_t>(round_of(msg));
  auto& out = frame.payload;
  out.reserve(payload_size(frame.tag, params));
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Round1Message>) {
          append_elements(out, m.mu_a, n, fp);
          append_elements(out, m.mu_b, n, fp);
        } else if constexpr (std::is_same_v<T, Round2Message>) {
          append_element(out, m.tau_a, fp);
          append_element(out, m.tau_b, fp);
        } else if constexpr (std::is_same_v<T, Round3Message>) {
          const std::size_t k = mask_count(n);
          if (m.masked_a.size() != k || m.masked_b.size() != k) {
            throw Error(ErrorCode::kMalformedMessage, "round 3 must carry " + std::to_string(k) + " strings per side");
          }
          for (const auto& s : m.masked_a) append_bits(out, s, params.q);
          for (const auto& s : m.masked_b) append_bits(out, s, params.q);
          append_element(out, m.a, fp);
          append_element(out, m.b, fp);
          append_bits(out, m.z_a, params.h2.qprime);
          append_bits(out, m.z_b, params.h2.qprime);
        } else if constexpr (std::is_same_v<T, Round4Message>) {
          append_elements(out, m.nu, n, fp);
        } else {
          append_element(out, m.tau_b, fp);
        }
      },
      msg);
  return frame;
}

RoundMessage decode_message(const Frame& frame, const ProtocolParams& params) {
  if (frame.tag < 1 || frame.tag > 5) {
    throw Error(ErrorCode::kTagMismatch, "tag 0x" + to_hex(std::span(&frame.tag, 1)) + " is not a round message");
  }
  const std::size_t expected = payload_size(frame.tag, params);
  if (frame.payload.size() != expected) {
    throw PositionedError(ErrorCode::kMalformedMessage, std::min(frame.payload.size(), expected),
                          "round " + std::to_string(frame.tag) + " payload is " +
                              std::to_string(frame.payload.size()) + " bytes, expected " +
                              std::to_string(expected));
  }
  const FieldParams& fp = params.fp;
  const std::size_t n = params.n;
  PayloadReader in(frame.payload);
  RoundMessage out;
  switch (frame.tag) {
    case 1: {
      Round1Message m;
      m.mu_a = in.elements(n, fp);
      m.mu_b = in.elements(n, fp);
      out = std::move(m);
      break;
    }
    case 2: {
      Round2Message m;
      m.tau_a = in.element(fp);
      m.tau_b = in.element(fp);
      out = std::move(m);
      break;
    }
    case 3: {
      Round3Message m;
      m.masked_a = in.bit_list(mask_count(n), params.q);
      m.masked_b = in.bit_list(mask_count(n), params.q);
      m.a = in.element(fp);
      m.b = in.element(fp);
      m.z_a = in.bits(params.h2.qprime);
      m.z_b = in.bits(params.h2.qprime);
      out = std::move(m);
      break;
    }
    case 4: out = Round4Message{in.elements(n, fp)}; break;
    default: out = Round5Message{in.element(fp)}; break;
  }
  in.finish();
  return out;
}

Frame make_hello(const ProtocolParams& params) {
  Frame f;
  f.tag = kHelloTag;
  f.payload.push_back(kWireVersion);
  const auto digest = params_digest(params);
  f.payload.insert(f.payload.end(), digest.begin(), digest.end());
  return f;
}

void check_hello(const Frame& frame, const ProtocolParams& params) {
  if (frame.tag != kHelloTag) throw Error(ErrorCode::kTagMismatch, "expected hello frame");
  if (frame.payload.size() != 9) {
    throw PositionedError(ErrorCode::kMalformedMessage, std::min<std::size_t>(frame.payload.size(), 9),
                          "hello payload must be 9 bytes");
  }
  if (frame.payload[0] != kWireVersion) {
    throw PositionedError(ErrorCode::kMalformedMessage, 0, "unsupported wire version");
  }
  const auto digest = params_digest(params);
  if (!std::equal(digest.begin(), digest.end(), frame.payload.begin() + 1)) {
    throw Error(ErrorCode::kDigestMismatch, "peer parameter digest " +
                                                to_hex(std::span(frame.payload).subspan(1)) +
                                                " differs from local " + to_hex(digest));
  }
}

ChannelPair make_in_process_pair() {
  auto a_to_b = std::make_shared<Pipe>();
  auto b_to_a = std::make_shared<Pipe>();
  ChannelPair out;
  out.alice = std::make_unique<InProcessChannel>(b_to_a, a_to_b);
  out.bob = std::make_unique<InProcessChannel>(a_to_b, b_to_a);
  return out;
}

void RecordingChannel::send_frame(const Frame& frame) {
  inner_.send_frame(frame);
  log_.push_back(frame);
}

Frame RecordingChannel::recv_frame(std::chrono::milliseconds timeout) {
  Frame f = inner_.recv_frame(timeout);
  log_.push_back(f);
  return f;
}

Endpoint parse_endpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw Error(ErrorCode::kParseError, "expected HOST:PORT, got '" + text + "'");
  }
  Endpoint ep;
  ep.host = text.substr(0, colon);
  if (ep.host.size() > 2 && ep.host.front() == '[' && ep.host.back() == ']') {
    ep.host = ep.host.substr(1, ep.host.size() - 2);
  }
  const std::string port = text.substr(colon + 1);
  if (port.find_first_not_of("0123456789") != std::string::npos || port.size() > 5 ||
      std::stoul(port) > 65535) {
    throw Error(ErrorCode::kParseError, "invalid port '" + port + "'");
  }
  ep.port = static_cast<std::uint16_t>(std::stoul(port));
  return ep;
}

TcpListener::TcpListener(const Endpoint& where) {
  auto res = resolve(where, true);
  for (addrinfo* ai = res.get(); ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      sockaddr_storage addr{};
      socklen_t len = sizeof(addr);
      ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
      port_ = addr.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
                                         : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
      fd_ = fd;
      return;
    }
    ::close(fd);
  }
  throw_errno("cannot listen on " + where.host + ":" + std::to_string(where.port));
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<Channel> TcpListener::accept(std::chrono::milliseconds timeout) {
  if (!wait_fd(fd_, POLLIN, std::chrono::steady_clock::now() + timeout)) {
    throw Error(ErrorCode::kTimeout, "no connection within " + std::to_string(timeout.count()) + " ms");
  }
  const int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
  if (fd < 0) throw_errno("accept");
  return std::make_unique<TcpChannel>(fd);
}

std::unique_ptr<Channel> tcp_connect(const Endpoint& where, std::chrono::milliseconds timeout) {
  auto res = resolve(where, false);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::string last_error = "no address";
  for (addrinfo* ai = res.get(); ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC | SOCK_NONBLOCK, ai->ai_protocol);
    if (fd < 0) continue;
    int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc != 0 && errno == EINPROGRESS) {
      if (wait_fd(fd, POLLOUT, deadline)) {
        int err = 0;
        socklen_t len = sizeof(err);
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        errno = err;
        rc = err == 0 ? 0 : -1;
      } else {
        errno = ETIMEDOUT;
      }
    }
    if (rc == 0) {
      // Back to blocking mode; reads are bounded by poll instead.
      const int flags = ::fcntl(fd, F_GETFL);
      ::fcntl(fd, F_SETFL, flags & ~O_NONBLOCK);
      return std::make_unique<TcpChannel>(fd);
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  throw Error(ErrorCode::kIoError, "cannot connect to " + where.host + ":" + std::to_string(where.port) +
                                       ": " + last_error);
}

void run_alice(AliceSession& alice, Channel& channel, const EndpointOptions& options) {
  const ProtocolParams& params = alice.params();
  check_hello(channel.recv_frame(options.timeout), params);
  channel.send_frame(make_hello(params));

  channel.send_frame(encode_message(alice.round1(), params));
  const auto r2 = decode_as<Round2Message>(channel.recv_frame(options.timeout), params);
  channel.send_frame(encode_message(alice.round3(r2), params));
  const auto r4 = decode_as<Round4Message>(channel.recv_frame(options.timeout), params);
  channel.send_frame(encode_message(alice.round5(r4), params));
}

BobOutcome run_bob(BobSession& bob, Channel& channel, Side choice, const EndpointOptions& options) {
  const ProtocolParams& params = bob.params();
  channel.send_frame(make_hello(params));
  check_hello(channel.recv_frame(options.timeout), params);

  BobOutcome out;
  Transcript& t = out.transcript;
  t.choice = choice;
  t.r1 = decode_as<Round1Message>(channel.recv_frame(options.timeout), params);
  t.r2 = bob.round2(t.r1);
  channel.send_frame(encode_message(t.r2, params));
  t.r3 = decode_as<Round3Message>(channel.recv_frame(options.timeout), params);
  t.r4 = bob.round4(t.r3, choice);
  channel.send_frame(encode_message(t.r4, params));
  t.r5 = decode_as<Round5Message>(channel.recv_frame(options.timeout), params);
  out.recovered = bob.recover(t.r5);
  return out;
}

ProtocolRun run_protocol(AliceSession& alice, BobSession& bob, Channel& alice_end, Channel& bob_end,
                         Side choice, const EndpointOptions& options) {
  std::exception_ptr alice_error;
  std::thread worker([&] {
    try {
      run_alice(alice, alice_end, options);
    } catch (...) {
      alice_error = std::current_exception();
      alice_end.close();
    }
  });

  ProtocolRun run;
  std::exception_ptr bob_error;
  try {
    RecordingChannel recorder(bob_end, run.frames);
    BobOutcome outcome = run_bob(bob, recorder, choice, options);
    run.transcript = std::move(outcome.transcript);
    run.recovered = std::move(outcome.recovered);
  } catch (...) {
    bob_error = std::current_exception();
    bob_end.close();
  }
  worker.join();
  if (alice_error) std::rethrow_exception(alice_error);
  if (bob_error) std::rethrow_exception(bob_error);
  return run;
}

ProtocolRun run_protocol_in_process(AliceSession& alice, BobSession& bob, Side choice,
                                    const EndpointOptions& options) {
  ChannelPair pair = make_in_process_pair();
  return run_protocol(alice, bob, *pair.alice, *pair.bob, choice, options);
}

ProtocolRun run_protocol_tcp_loopback(AliceSession& alice, BobSession& bob, Side choice,
                                      const EndpointOptions& options) {
  TcpListener listener(Endpoint{"127.0.0.1", 0});
  auto bob_end = tcp_connect(Endpoint{"127.0.0.1", listener.port()}, options.timeout);
  auto alice_end = listener.accept(options.timeout);
  return run_protocol(alice, bob, *alice_end, *bob_end, choice, options);
}

std::array<std::uint8_t, 32> transcript_digest(const std::vector<Frame>& frames) {
  std::vector<std::uint8_t> all;
  for (const auto& f : frames) {
    const auto bytes = serialize_frame(f);
    all.insert(all.end(), bytes.begin(), bytes.end());
  }
  return sha256(all);
}

}  // namespace ot12
