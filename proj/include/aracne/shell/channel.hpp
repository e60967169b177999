#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

#include "aracne/domain.hpp"
#include "aracne/errors.hpp"

namespace aracne::shell {

enum class Transport { Ssh, InProcess };

// Where to attack. Passwords come from the environment or the harness and
// must never be logged.
struct Endpoint {
  std::string host;
  int port = 22;
  std::string username;
  std::string password;
  Transport transport = Transport::Ssh;
};

// Seeds an Endpoint from ARACNE_SSH_HOST/PORT/USER/PASSWORD.
Endpoint endpoint_from_env();

// Raw byte pipe underneath a Session. recv_some blocks until bytes arrive or
// the deadline passes (empty return). closed() turns true after remote EOF.
class ByteChannel {
 public:
  virtual ~ByteChannel() = default;
  virtual void send_bytes(std::string_view data) = 0;
  virtual std::string recv_some(std::chrono::milliseconds deadline) = 0;
  virtual bool closed() const = 0;
  virtual void close() = 0;
};

// Streaming variant of util::strip_control_sequences: escape sequences and
// CRLF pairs may arrive split across reads, so the state machine persists
// between feed() calls. This keeps the captured output independent of how
// the byte stream was chunked.
class StreamNormalizer {
 public:
  std::string feed(std::string_view chunk);

 private:
  enum class State { Plain, Esc, Csi, Osc, OscEsc };
  State state_ = State::Plain;
};

// Thrown when command_timeout elapses with neither prompt nor quiet period;
// carries the partial capture so the caller can still show what arrived
// (e.g. an interactive yes/no question awaiting input).
class HardTimeoutError : public Error {
 public:
  HardTimeoutError(const std::string& what, CommandExecution partial)
      : Error(what), partial_(std::move(partial)) {}
  const CommandExecution& partial() const { return partial_; }

 private:
  CommandExecution partial_;
};

// One interactive remote shell. Commands are written as a human would type
// them; output is captured until the calibrated prompt reappears at the
// stream tail, the quiet period elapses, or the output cap is hit.
class Session {
 public:
  Session() = default;

  // Establishes the channel, authenticates, drains the banner and calibrates
  // the prompt by observing the idle prompt twice (empty line, diffed tails).
  // Throws AuthFailure, ConnectTimeout or TransportError.
  static Session connect(const Endpoint& endpoint, const AgentConfig& config);

  // Wraps an already-open channel with a known prompt literal. Used by tests
  // and by transports that finish calibration themselves.
  static Session attach(std::unique_ptr<ByteChannel> channel, std::string prompt_literal);

  // Throws SessionClosedError and HardTimeoutError; a quiet-period or
  // output-cap completion returns normally with truncated=true.
  CommandExecution execute(const std::string& command, const AgentConfig& config);

  void close();  // idempotent
  bool connected() const { return channel_ != nullptr && !channel_->closed() && open_; }
  const std::string& prompt_pattern() const { return prompt_; }

 private:
  // Reads until the stream goes quiet for quiet_ms; returns normalized text.
  std::string drain(std::chrono::milliseconds quiet_ms, std::chrono::milliseconds hard_ms);

  std::unique_ptr<ByteChannel> channel_;
  std::string prompt_;
  bool open_ = false;
};

// Post-processing shared by all completions: removes the trailing prompt when
// present, the echoed command line, and at most one trailing newline.
std::string finalize_output(std::string normalized, const std::string& command,
                            const std::string& prompt);

// Longest common suffix of two calibration tails, used as the prompt literal.
std::string common_suffix(std::string_view a, std::string_view b);

// Plain TCP client channel for the loopback interactive-shell protocol.
std::unique_ptr<ByteChannel> open_tcp_channel(const std::string& host, int port,
                                              std::chrono::milliseconds connect_timeout);

}  // namespace aracne::shell
