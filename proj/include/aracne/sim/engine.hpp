#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "aracne/shell/channel.hpp"
#include "aracne/sim/scenario.hpp"

namespace aracne::sim {

// Per-connection shell state over an immutable Scenario. handle_command is
// deterministic: the same scenario and command sequence always produce the
// same outputs. A command matching a blocking pattern emits its handler
// response (the interactive question) and then hangs the session: no prompt,
// no further bytes.
class SimSession {
 public:
  explicit SimSession(std::shared_ptr<const Scenario> scenario);

  // Output text for one submitted line, without echo or prompt framing.
  // Segments joined with && run left to right.
  std::string handle_command(const std::string& line);

  bool hung() const { return hung_; }
  const Scenario& scenario() const { return *scenario_; }
  const std::string& cwd() const { return cwd_; }

 private:
  std::string run_segment(const std::string& segment);
  std::string resolve(const std::string& path) const;
  const FsNode* node(const std::string& abs_path) const;
  std::vector<std::string> children(const std::string& abs_path) const;

  std::string cmd_echo(const std::vector<std::string>& words);
  std::string cmd_ls(const std::vector<std::string>& words);
  std::string cmd_cat(const std::vector<std::string>& words);
  std::string cmd_cd(const std::vector<std::string>& words);
  std::string cmd_find(const std::vector<std::string>& words);
  std::string cmd_grep(const std::vector<std::string>& words);
  std::string cmd_base64(const std::vector<std::string>& words);
  std::string cmd_head_tail(const std::vector<std::string>& words, bool head);

  std::shared_ptr<const Scenario> scenario_;
  std::string cwd_;
  bool hung_ = false;
};

// Wire framing shared by the in-process channel and the loopback server so
// both transports emit byte-identical streams.
std::string wire_greeting(const Scenario& scenario);
std::string wire_response(const std::string& echoed_line, const std::string& output,
                          const std::string& prompt, bool hung);

// One served scenario. Each open_channel() call gets an independent
// SimSession (own cwd, own hang state).
class SimServer {
 public:
  explicit SimServer(Scenario scenario)
      : scenario_(std::make_shared<const Scenario>(std::move(scenario))) {}

  const Scenario& scenario() const { return *scenario_; }
  std::shared_ptr<const Scenario> scenario_ptr() const { return scenario_; }

  std::unique_ptr<shell::ByteChannel> open_channel();

 private:
  std::shared_ptr<const Scenario> scenario_;
};

// Process-local registry backing the in_process transport: serving returns an
// Endpoint whose host names the registered server.
shell::Endpoint serve_in_process(std::shared_ptr<SimServer> server);
std::shared_ptr<SimServer> find_in_process(const std::string& name);

}  // namespace aracne::sim
