#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aracne/domain.hpp"
#include "aracne/llm/gateway.hpp"
#include "aracne/shell/channel.hpp"

namespace aracne {

// Append-only NDJSON audit trail for one attempt. Never summarized, never
// rewritten; optionally mirrors a human-readable line per event to `echo`.
class AttackLog {
 public:
  AttackLog(std::filesystem::path file, std::ostream* echo = nullptr);

  void event(const std::string& kind, nlohmann::json fields);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ostream* echo_;
  int seq_ = 0;
  std::chrono::steady_clock::time_point started_;
};

// One full plan -> interpret -> execute -> record loop against one session.
// All failures come back as transcript outcomes, never as exceptions.
// Files written under attempt_dir: context.ndjson, attack.log, result.json.
AttackTranscript run_attack(const Goal& goal, const shell::Endpoint& endpoint,
                            const AgentConfig& config, llm::Gateway& gateway,
                            const std::filesystem::path& attempt_dir, int attempt_index = 0,
                            std::ostream* echo = nullptr);

// Up to `attempts` independent attacks, each with a fresh session, fresh
// context store and its own attempt_<k> directory; stops at the first
// GoalReached. Returns every transcript produced.
std::vector<AttackTranscript> run_attempts(const Goal& goal, const shell::Endpoint& endpoint,
                                           const AgentConfig& config, llm::Gateway& gateway,
                                           const std::filesystem::path& run_dir, int attempts,
                                           std::ostream* echo = nullptr);

std::filesystem::path attempt_dir(const std::filesystem::path& run_dir, int attempt_index);

}  // namespace aracne
