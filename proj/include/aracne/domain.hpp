#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aracne {

enum class GoalOrigin { User, Benchmark };

// The attacker's objective. An optional augmentation line (e.g. the current
// level's password disclosure) is appended verbatim after a newline.
struct Goal {
  std::string text;
  std::optional<std::string> augmentation;
  GoalOrigin origin = GoalOrigin::User;

  std::string render() const {
    if (augmentation) return text + "\n" + *augmentation;
    return text;
  }
};

struct PlanStep {
  int ordinal = 0;
  std::string description;
};

// Parsed planner output: ordered steps, one verification action and the
// model's own goal-reached verdict. steps may be empty only when
// goal_reached is true.
struct AttackPlan {
  std::vector<PlanStep> steps;
  std::string goal_verification;
  bool goal_reached = false;

  bool operator==(const AttackPlan& other) const {
    if (goal_reached != other.goal_reached) return false;
    if (goal_verification != other.goal_verification) return false;
    if (steps.size() != other.steps.size()) return false;
    for (size_t i = 0; i < steps.size(); ++i) {
      if (steps[i].description != other.steps[i].description) return false;
    }
    return true;
  }
};

// One executed command and what came back. output excludes the echoed
// command line and the trailing prompt; control sequences are stripped.
struct CommandExecution {
  std::string command;
  std::string output;
  bool truncated = false;
  std::int64_t wall_time_ms = 0;
};

// One loop iteration's worth of planner working memory.
struct ContextRecord {
  std::optional<AttackPlan> previous_plan;
  std::optional<std::string> command;
  std::optional<std::string> output;
  int iteration = 0;  // 1-based, contiguous within a store
};

enum class Outcome {
  GoalReached,
  ActionBudgetExhausted,
  ProviderFailure,
  ConnectionFailure,
  Aborted,
};

std::string to_string(Outcome outcome);
std::optional<Outcome> outcome_from_string(const std::string& text);

struct AttackTranscript {
  int attempt_index = 0;
  Goal goal;
  std::vector<ContextRecord> records;
  Outcome outcome = Outcome::Aborted;
  int actions = 0;
  std::int64_t duration_ms = 0;
  std::filesystem::path log_path;
  std::filesystem::path context_path;
};

enum class VerificationPolicy { ExecuteVerification, TrustFlag };

// Per-LLM-call and per-command knobs for one agent run. role_models must
// route planner and interpreter always, summarizer only when enabled.
struct AgentConfig {
  std::map<std::string, std::string> role_models = {
      {"planner", "openai/o3-mini"},
      {"interpreter", "meta/llama-3.1"},
      {"summarizer", "openai/gpt-4o"},
  };
  bool summarizer_enabled = false;
  std::optional<int> max_actions;
  VerificationPolicy verification_policy = VerificationPolicy::ExecuteVerification;
  int retry_budget = 2;
  std::size_t output_cap = 64 * 1024;
  std::int64_t command_timeout_ms = 60'000;
  std::int64_t quiet_ms = 1'500;
  std::int64_t settle_ms = 30;
  std::int64_t connect_timeout_ms = 10'000;
  std::size_t summary_cap = 4'000;
  std::vector<std::string> refusal_phrases = {"i cannot", "i'm sorry", "as an ai"};
  std::vector<std::string> command_deny_patterns;  // glob patterns, default empty
  std::int64_t provider_timeout_ms = 120'000;
};

}  // namespace aracne
