#include "aracne/sim/tcp_server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "aracne/sim/engine.hpp"
#include "aracne/util.hpp"

namespace aracne::sim {

namespace {

bool send_all(int fd, std::string_view data) {
  size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    sent += static_cast<size_t>(n);
  }
  return true;
}

// Reads one '\n'-terminated line (CR dropped); empty optional on EOF.
std::optional<std::string> recv_line(int fd, std::string& carry, const std::atomic<bool>& running) {
  while (running.load()) {
    size_t nl = carry.find('\n');
    if (nl != std::string::npos) {
      std::string line = carry.substr(0, nl);
      carry.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    struct pollfd pfd{fd, POLLIN, 0};
    int ready = ::poll(&pfd, 1, 200);
    if (ready <= 0) continue;
    char buffer[4096];
    ssize_t n = ::recv(fd, buffer, sizeof(buffer), 0);
    if (n <= 0) return std::nullopt;
    carry.append(buffer, static_cast<size_t>(n));
  }
  return std::nullopt;
}

}  // namespace

LoopbackServer::LoopbackServer(Scenario scenario)
    : scenario_(std::make_shared<const Scenario>(std::move(scenario))) {}

LoopbackServer::~LoopbackServer() { stop(); }

void LoopbackServer::start(int port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw TransportError(std::string("socket: ") + std::strerror(errno));
  int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));

  struct sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::bind(listen_fd_, reinterpret_cast<struct sockaddr*>(&addr), sizeof(addr)) != 0) {
    int saved = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw TransportError(std::string("bind 127.0.0.1:") + std::to_string(port) + " failed: " +
                         std::strerror(saved));
  }
  if (::listen(listen_fd_, 8) != 0) {
    int saved = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw TransportError(std::string("listen failed: ") + std::strerror(saved));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<struct sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);

  running_ = true;
  // the acceptor works on its own copy of the fd; stop() may reset the
  // member while the loop is still draining
  int accept_fd = listen_fd_;
  acceptor_ = std::thread([this, accept_fd] { accept_loop(accept_fd); });
}

void LoopbackServer::accept_loop(int listen_fd) {
  while (running_.load()) {
    struct pollfd pfd{listen_fd, POLLIN, 0};
    int ready = ::poll(&pfd, 1, 200);
    if (!running_.load()) break;
    if (ready <= 0) continue;
    int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd < 0) continue;
    workers_.emplace_back([this, fd] {
      ++active_;
      serve_connection(fd);
      ::close(fd);
      --active_;
    });
  }
}

void LoopbackServer::serve_connection(int fd) {
  std::string carry;

  // Login handshake. Credentials are only checked when the scenario declares
  // [auth]; the exchange itself is always present so clients see one shape.
  if (!send_all(fd, "login: ")) return;
  auto user = recv_line(fd, carry, running_);
  if (!user) return;
  if (!send_all(fd, "password: ")) return;
  auto password = recv_line(fd, carry, running_);
  if (!password) return;
  if (scenario_->auth) {
    if (*user != scenario_->auth->username || *password != scenario_->auth->password) {
      send_all(fd, "Permission denied.\r\n");
      return;
    }
  }
  if (!send_all(fd, "\r\n" + wire_greeting(*scenario_))) return;

  SimSession session(scenario_);
  while (running_.load()) {
    auto line = recv_line(fd, carry, running_);
    if (!line) return;
    if (session.hung()) continue;  // blocked awaiting input: no bytes back
    std::string output = session.handle_command(*line);
    if (!send_all(fd, wire_response(*line, output, scenario_->prompt, session.hung()))) return;
  }
}

void LoopbackServer::stop() {
  if (!running_.exchange(false) && listen_fd_ < 0) return;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  if (acceptor_.joinable()) acceptor_.join();
  for (auto& worker : workers_) {
    if (worker.joinable()) worker.join();
  }
  workers_.clear();
}

shell::Endpoint LoopbackServer::endpoint() const {
  shell::Endpoint endpoint;
  endpoint.transport = shell::Transport::Ssh;
  endpoint.host = "127.0.0.1";
  endpoint.port = port_;
  endpoint.username = scenario_->username();
  if (scenario_->auth) endpoint.password = scenario_->auth->password;
  return endpoint;
}

}  // namespace aracne::sim
