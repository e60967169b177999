#pragma once

#include <atomic>
#include <memory>
#include <thread>
#include <vector>

#include "aracne/shell/channel.hpp"
#include "aracne/sim/scenario.hpp"

namespace aracne::sim {

// Serves a Scenario as an interactive shell on 127.0.0.1. The wire protocol
// is a plaintext login/password handshake followed by the same echo+prompt
// framing the in-process transport uses; a real SSH server would slot in at
// this layer. Every connection gets an independent session.
class LoopbackServer {
 public:
  explicit LoopbackServer(Scenario scenario);
  ~LoopbackServer();

  LoopbackServer(const LoopbackServer&) = delete;
  LoopbackServer& operator=(const LoopbackServer&) = delete;

  // Binds and starts accepting. port 0 picks an ephemeral port.
  // Throws TransportError on bind failure.
  void start(int port = 0);
  void stop();

  int port() const { return port_; }
  shell::Endpoint endpoint() const;
  int active_connections() const { return active_.load(); }

 private:
  void accept_loop(int listen_fd);
  void serve_connection(int fd);

  std::shared_ptr<const Scenario> scenario_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> running_{false};
  std::atomic<int> active_{0};
  std::thread acceptor_;
  std::vector<std::thread> workers_;
};

}  // namespace aracne::sim
