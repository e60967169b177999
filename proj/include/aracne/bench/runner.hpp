#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "aracne/bench/level.hpp"
#include "aracne/domain.hpp"
#include "aracne/llm/gateway.hpp"

namespace aracne::bench {

struct RunOptions {
  AgentConfig agent_config;       // per-level budgets override max_actions
  llm::Gateway* gateway = nullptr;
  std::filesystem::path run_dir;
  std::ostream* echo = nullptr;
};

struct LevelOutcome {
  LevelResult row;
  std::optional<std::string> harvested;  // next-level credential, when extracted
};

// Instantiates the goal from the template (+ augmentation) with the current
// credential, runs the attempt budget and classifies the winner against the
// success predicate. A GoalReached transcript that fails the predicate is a
// false positive and counts as a target win.
LevelOutcome run_level(const LevelSpec& spec, const std::string& credential,
                       const RunOptions& options);

// Runs levels in file order, chaining credentials: a win's extracted flag
// becomes the next password, a loss or unsuitable level falls back to the
// level's fallback credential. Extraction failure without a fallback halts
// with a partial table.
ResultTable run_campaign(const CampaignSpec& campaign, const RunOptions& options);

}  // namespace aracne::bench
