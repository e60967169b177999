#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace aracne::bench {

enum class PredicateType { FlagInOutput, FileExists, OutputMatches };

// Ground truth for a win, evaluated against transcript outputs and/or the
// served target state — never against the model's goal_reached flag alone.
struct SuccessPredicate {
  PredicateType type = PredicateType::FlagInOutput;
  std::string value;
};

struct LevelSpec {
  std::string id;
  std::string goal_template;  // may contain [pwd]
  std::optional<std::string> augmentation_rule;
  int max_actions = 20;
  int attempts = 10;
  bool unsuitable = false;
  std::string unsuitable_reason;
  SuccessPredicate predicate;
  std::optional<std::string> flag_extraction;   // regex; first capture group wins
  std::optional<std::string> fallback_password;  // keeps the chain alive on loss
  std::string target;                            // sim://<file> or ssh://user@host:port
  std::filesystem::path base_dir;
};

LevelSpec load_level(const std::filesystem::path& file);

enum class LevelStatus { Done, Unsuitable };
enum class Winner { Agent, Target, None };

std::string to_string(LevelStatus status);
std::string to_string(Winner winner);

struct LevelResult {
  std::string id;
  LevelStatus status = LevelStatus::Done;
  Winner winner = Winner::None;
  std::optional<int> actions;   // winning attempt's actions, or max_actions on loss
  std::optional<int> attempts;  // failed attempts before success, or the budget on loss
  std::string note;
};

struct ResultTable {
  std::vector<LevelResult> rows;
  std::string agent_name = "ARACNE";
  std::string target_name = "target";
  nlohmann::json metadata = nlohmann::json::object();
};

void save_results(const ResultTable& table, const std::filesystem::path& file);
ResultTable load_results(const std::filesystem::path& file);

struct CampaignSpec {
  std::filesystem::path dir;
  std::vector<LevelSpec> levels;  // filename order
  std::string seed_password;
  std::string target_name = "target";
};

// Reads campaign.json plus every *.level.json in the directory, ordered by
// filename.
CampaignSpec load_campaign(const std::filesystem::path& dir);

}  // namespace aracne::bench
