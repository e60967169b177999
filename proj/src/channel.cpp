#include "aracne/shell/channel.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

#include "aracne/sim/engine.hpp"
#include "aracne/util.hpp"

namespace aracne::shell {

using std::chrono::milliseconds;
using std::chrono::steady_clock;

Endpoint endpoint_from_env() {
  Endpoint endpoint;
  if (const char* host = std::getenv("ARACNE_SSH_HOST")) endpoint.host = host;
  if (const char* port = std::getenv("ARACNE_SSH_PORT")) endpoint.port = std::atoi(port);
  if (const char* user = std::getenv("ARACNE_SSH_USER")) endpoint.username = user;
  if (const char* password = std::getenv("ARACNE_SSH_PASSWORD")) endpoint.password = password;
  return endpoint;
}

std::string StreamNormalizer::feed(std::string_view chunk) {
  std::string out;
  out.reserve(chunk.size());
  for (char c : chunk) {
    unsigned char uc = static_cast<unsigned char>(c);
    switch (state_) {
      case State::Plain:
        if (c == '\x1b') {
          state_ = State::Esc;
        } else if (c == '\n' || c == '\t') {
          out.push_back(c);
        } else if (uc >= 0x20 || uc >= 0x80) {
          out.push_back(c);
        }
        break;
      case State::Esc:
        if (c == '[') {
          state_ = State::Csi;
        } else if (c == ']') {
          state_ = State::Osc;
        } else {
          state_ = State::Plain;
        }
        break;
      case State::Csi:
        if (uc >= 0x40 && uc <= 0x7E) state_ = State::Plain;
        break;
      case State::Osc:
        if (c == '\a') {
          state_ = State::Plain;
        } else if (c == '\x1b') {
          state_ = State::OscEsc;
        }
        break;
      case State::OscEsc:
        state_ = (c == '\\') ? State::Plain : State::Osc;
        break;
    }
  }
  return out;
}

std::string common_suffix(std::string_view a, std::string_view b) {
  size_t n = 0;
  while (n < a.size() && n < b.size() && a[a.size() - 1 - n] == b[b.size() - 1 - n]) ++n;
  return std::string(a.substr(a.size() - n));
}

std::string finalize_output(std::string normalized, const std::string& command,
                            const std::string& prompt) {
  if (!prompt.empty() && util::ends_with(normalized, prompt)) {
    normalized.resize(normalized.size() - prompt.size());
  }
  if (!normalized.empty() && normalized.back() == '\n') {
    normalized.pop_back();
  }
  size_t nl = normalized.find('\n');
  std::string first_line = (nl == std::string::npos) ? normalized : normalized.substr(0, nl);
  if (first_line == command || util::rtrim(first_line) == command) {
    normalized = (nl == std::string::npos) ? std::string() : normalized.substr(nl + 1);
  }
  return normalized;
}

// --- TCP channel ---

namespace {

class TcpChannel : public ByteChannel {
 public:
  explicit TcpChannel(int fd) : fd_(fd) {}
  ~TcpChannel() override { close(); }

  void send_bytes(std::string_view data) override {
    if (fd_ < 0) throw SessionClosedError("channel is closed");
    size_t sent = 0;
    while (sent < data.size()) {
      ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        closed_ = true;
        throw TransportError(std::string("send failed: ") + std::strerror(errno));
      }
      sent += static_cast<size_t>(n);
    }
  }

  std::string recv_some(milliseconds deadline) override {
    if (fd_ < 0 || closed_) return {};
    struct pollfd pfd{fd_, POLLIN, 0};
    int timeout = static_cast<int>(std::max<std::int64_t>(0, deadline.count()));
    int ready = ::poll(&pfd, 1, timeout);
    if (ready <= 0) return {};
    char buffer[4096];
    ssize_t n = ::recv(fd_, buffer, sizeof(buffer), 0);
    if (n == 0) {
      closed_ = true;
      return {};
    }
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) return {};
      closed_ = true;
      return {};
    }
    return std::string(buffer, static_cast<size_t>(n));
  }

  bool closed() const override { return closed_; }

  void close() override {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
    closed_ = true;
  }

 private:
  int fd_ = -1;
  bool closed_ = false;
};

}  // namespace

std::unique_ptr<ByteChannel> open_tcp_channel(const std::string& host, int port,
                                              milliseconds connect_timeout) {
  struct addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  struct addrinfo* result = nullptr;
  std::string port_text = std::to_string(port);
  if (::getaddrinfo(host.c_str(), port_text.c_str(), &hints, &result) != 0 || result == nullptr) {
    throw TransportError("cannot resolve host: " + host);
  }
  int fd = ::socket(result->ai_family, SOCK_STREAM, 0);
  if (fd < 0) {
    ::freeaddrinfo(result);
    throw TransportError(std::string("socket: ") + std::strerror(errno));
  }
  int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
  int rc = ::connect(fd, result->ai_addr, result->ai_addrlen);
  ::freeaddrinfo(result);
  if (rc != 0 && errno != EINPROGRESS) {
    ::close(fd);
    throw ConnectTimeout("connect to " + host + ":" + port_text + " failed: " + std::strerror(errno));
  }
  if (rc != 0) {
    struct pollfd pfd{fd, POLLOUT, 0};
    int ready = ::poll(&pfd, 1, static_cast<int>(connect_timeout.count()));
    if (ready <= 0) {
      ::close(fd);
      throw ConnectTimeout("connect to " + host + ":" + port_text + " timed out");
    }
    int error = 0;
    socklen_t len = sizeof(error);
    ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &error, &len);
    if (error != 0) {
      ::close(fd);
      throw ConnectTimeout("connect to " + host + ":" + port_text + " failed: " +
                           std::strerror(error));
    }
  }
  ::fcntl(fd, F_SETFL, flags);
  return std::make_unique<TcpChannel>(fd);
}

// --- Session ---

Session Session::attach(std::unique_ptr<ByteChannel> channel, std::string prompt_literal) {
  Session session;
  session.channel_ = std::move(channel);
  session.prompt_ = std::move(prompt_literal);
  session.open_ = true;
  return session;
}

std::string Session::drain(milliseconds quiet_ms, milliseconds hard_ms) {
  StreamNormalizer normalizer;
  std::string normalized;
  auto start = steady_clock::now();
  while (steady_clock::now() - start < hard_ms) {
    std::string chunk = channel_->recv_some(quiet_ms);
    if (chunk.empty()) break;  // quiet period or EOF
    normalized += normalizer.feed(chunk);
  }
  return normalized;
}

namespace {

std::string last_line(const std::string& text) {
  size_t nl = text.rfind('\n');
  return nl == std::string::npos ? text : text.substr(nl + 1);
}

// Reads until `token` shows up in the normalized stream. Used for the
// loopback login handshake.
std::string expect_token(ByteChannel& channel, StreamNormalizer& normalizer, std::string& seen,
                         const std::string& token, milliseconds budget) {
  auto start = steady_clock::now();
  while (seen.find(token) == std::string::npos) {
    if (channel.closed()) {
      throw AuthFailure("connection closed during login handshake");
    }
    if (steady_clock::now() - start > budget) {
      throw TransportError("handshake timeout waiting for '" + token + "'");
    }
    std::string chunk = channel.recv_some(milliseconds(100));
    seen += normalizer.feed(chunk);
  }
  return seen;
}

}  // namespace

Session Session::connect(const Endpoint& endpoint, const AgentConfig& config) {
  Session session;
  if (endpoint.transport == Transport::InProcess) {
    auto server = sim::find_in_process(endpoint.host);
    if (!server) {
      throw TransportError("no in-process target registered under '" + endpoint.host + "'");
    }
    if (const auto& auth = server->scenario().auth) {
      if (auth->username != endpoint.username || auth->password != endpoint.password) {
        throw AuthFailure("authentication failed for user '" + endpoint.username + "'");
      }
    }
    session.channel_ = server->open_channel();
  } else {
    if (endpoint.password.empty() && endpoint.username.empty()) {
      throw AuthFailure("no credentials: set ARACNE_SSH_USER / ARACNE_SSH_PASSWORD");
    }
    session.channel_ =
        open_tcp_channel(endpoint.host, endpoint.port, milliseconds(config.connect_timeout_ms));
    StreamNormalizer normalizer;
    std::string seen;
    milliseconds budget(config.connect_timeout_ms);
    expect_token(*session.channel_, normalizer, seen, "login: ", budget);
    session.channel_->send_bytes(endpoint.username + "\n");
    expect_token(*session.channel_, normalizer, seen, "password: ", budget);
    session.channel_->send_bytes(endpoint.password + "\n");
  }
  session.open_ = true;

  // Banner drain then prompt calibration: observe the idle prompt twice and
  // keep the common tail.
  milliseconds quiet(config.quiet_ms);
  milliseconds budget(config.connect_timeout_ms);
  std::string first = session.drain(quiet, budget);
  if (first.find("Permission denied") != std::string::npos) {
    session.close();
    throw AuthFailure("authentication failed for user '" + endpoint.username + "'");
  }
  if (session.channel_->closed()) {
    session.close();
    throw AuthFailure("connection closed before a prompt appeared");
  }
  std::string tail1 = last_line(first);
  session.channel_->send_bytes("\n");
  std::string second = session.drain(quiet, budget);
  std::string tail2 = last_line(second);
  std::string prompt = common_suffix(tail1, tail2);
  if (util::trim(prompt).empty()) prompt = tail2;
  if (util::trim(prompt).empty()) {
    session.close();
    throw TransportError("prompt calibration failed: no stable prompt observed");
  }
  session.prompt_ = prompt;
  return session;
}

CommandExecution Session::execute(const std::string& command, const AgentConfig& config) {
  if (!open_ || channel_ == nullptr) throw SessionClosedError("session is not connected");
  if (channel_->closed()) {
    open_ = false;
    throw SessionClosedError("connection is closed");
  }
  if (command.find('\n') != std::string::npos) {
    throw ContractViolation("execute: command must be a single line");
  }

  auto start = steady_clock::now();
  channel_->send_bytes(command + "\n");

  StreamNormalizer normalizer;
  std::string normalized;
  size_t raw_bytes = 0;
  auto last_byte = start;
  const auto hard_deadline = start + milliseconds(config.command_timeout_ms);

  enum class Completion { Prompt, Quiet, Cap };
  Completion completion;
  while (true) {
    if (!prompt_.empty() && util::ends_with(normalized, prompt_)) {
      // A short settle read guards against a mid-stream byte run that merely
      // looks like the prompt: if more data is immediately behind it, keep
      // reading.
      std::string extra = channel_->recv_some(milliseconds(config.settle_ms));
      if (extra.empty()) {
        completion = Completion::Prompt;
        break;
      }
      raw_bytes += extra.size();
      normalized += normalizer.feed(extra);
      last_byte = steady_clock::now();
      if (raw_bytes >= config.output_cap) {
        completion = Completion::Cap;
        break;
      }
      continue;
    }
    auto now = steady_clock::now();
    if (now >= hard_deadline) {
      CommandExecution partial;
      partial.command = command;
      partial.output = finalize_output(normalized, command, prompt_);
      partial.truncated = true;
      partial.wall_time_ms =
          std::chrono::duration_cast<milliseconds>(now - start).count();
      throw HardTimeoutError("command timed out after " +
                                 std::to_string(config.command_timeout_ms) + " ms: " + command,
                             std::move(partial));
    }
    auto quiet_deadline = last_byte + milliseconds(config.quiet_ms);
    if (now >= quiet_deadline) {
      completion = Completion::Quiet;
      break;
    }
    auto next = std::min(quiet_deadline, hard_deadline);
    auto wait = std::chrono::duration_cast<milliseconds>(next - now);
    std::string chunk = channel_->recv_some(std::max(milliseconds(1), wait));
    if (chunk.empty()) {
      if (channel_->closed()) {
        open_ = false;
        throw SessionClosedError("connection closed mid-command");
      }
      continue;
    }
    raw_bytes += chunk.size();
    normalized += normalizer.feed(chunk);
    last_byte = steady_clock::now();
    if (raw_bytes >= config.output_cap) {
      completion = Completion::Cap;
      break;
    }
  }

  CommandExecution execution;
  execution.command = command;
  execution.output = finalize_output(std::move(normalized), command, prompt_);
  if (execution.output.size() > config.output_cap) {
    execution.output.resize(config.output_cap);
  }
  execution.truncated = completion != Completion::Prompt;
  execution.wall_time_ms =
      std::chrono::duration_cast<milliseconds>(steady_clock::now() - start).count();
  return execution;
}

void Session::close() {
  if (channel_) channel_->close();
  open_ = false;
}

}  // namespace aracne::shell
