#include "aracne/bench/level.hpp"

#include <algorithm>
#include <fstream>

#include "aracne/errors.hpp"
#include "aracne/util.hpp"

namespace aracne::bench {

using nlohmann::json;

std::string to_string(LevelStatus status) {
  return status == LevelStatus::Done ? "Done" : "Unsuitable";
}

std::string to_string(Winner winner) {
  switch (winner) {
    case Winner::Agent: return "Agent";
    case Winner::Target: return "Target";
    case Winner::None: return "None";
  }
  return "None";
}

namespace {

json parse_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw SchemaError("cannot open: " + file.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(file.string() + ": " + e.what());
  }
}

PredicateType predicate_type_from(const std::string& text, const std::filesystem::path& file) {
  if (text == "flag_in_output") return PredicateType::FlagInOutput;
  if (text == "file_exists") return PredicateType::FileExists;
  if (text == "output_matches") return PredicateType::OutputMatches;
  throw SchemaError(file.string() + ": unknown predicate type '" + text + "'");
}

Winner winner_from(const std::string& text) {
  if (text == "Agent") return Winner::Agent;
  if (text == "Target") return Winner::Target;
  return Winner::None;
}

}  // namespace

LevelSpec load_level(const std::filesystem::path& file) {
  json obj = parse_json_file(file);
  LevelSpec spec;
  spec.base_dir = file.parent_path();
  if (!obj.contains("id")) throw SchemaError(file.string() + ": level needs an 'id'");
  spec.id = obj["id"].get<std::string>();
  spec.goal_template = obj.value("goal", "");
  if (obj.contains("augmentation")) spec.augmentation_rule = obj["augmentation"].get<std::string>();
  spec.max_actions = obj.value("max_actions", 20);
  spec.attempts = obj.value("attempts", 10);
  spec.unsuitable = obj.value("unsuitable", false);
  spec.unsuitable_reason = obj.value("unsuitable_reason", "");
  if (spec.unsuitable && spec.unsuitable_reason.empty()) {
    throw SchemaError(file.string() + ": unsuitable levels must carry a reason");
  }
  if (!spec.unsuitable) {
    if (spec.goal_template.empty()) throw SchemaError(file.string() + ": level needs a 'goal'");
    if (!obj.contains("target")) throw SchemaError(file.string() + ": level needs a 'target'");
    spec.target = obj["target"].get<std::string>();
    if (!obj.contains("predicate")) throw SchemaError(file.string() + ": level needs a 'predicate'");
    const json& predicate = obj["predicate"];
    spec.predicate.type = predicate_type_from(predicate.value("type", ""), file);
    spec.predicate.value = predicate.value("value", "");
    if (spec.predicate.value.empty()) {
      throw SchemaError(file.string() + ": predicate needs a 'value'");
    }
  }
  if (obj.contains("flag_extraction")) {
    spec.flag_extraction = obj["flag_extraction"].get<std::string>();
  }
  if (obj.contains("fallback_password")) {
    spec.fallback_password = obj["fallback_password"].get<std::string>();
  }
  return spec;
}

void save_results(const ResultTable& table, const std::filesystem::path& file) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json entry = {
        {"id", row.id},
        {"status", to_string(row.status)},
        {"winner", to_string(row.winner)},
    };
    if (row.actions) entry["actions"] = *row.actions;
    if (row.attempts) entry["attempts"] = *row.attempts;
    if (!row.note.empty()) entry["note"] = row.note;
    rows.push_back(entry);
  }
  json out = {
      {"agent_name", table.agent_name},
      {"target_name", table.target_name},
      {"metadata", table.metadata},
      {"rows", rows},
  };
  util::write_file(file.string(), out.dump(2) + "\n");
}

ResultTable load_results(const std::filesystem::path& file) {
  json obj = parse_json_file(file);
  ResultTable table;
  table.agent_name = obj.value("agent_name", "ARACNE");
  table.target_name = obj.value("target_name", "target");
  table.metadata = obj.value("metadata", json::object());
  for (const auto& entry : obj.value("rows", json::array())) {
    LevelResult row;
    row.id = entry.value("id", "");
    row.status = entry.value("status", "Done") == "Unsuitable" ? LevelStatus::Unsuitable
                                                               : LevelStatus::Done;
    row.winner = winner_from(entry.value("winner", "None"));
    if (entry.contains("actions")) row.actions = entry["actions"].get<int>();
    if (entry.contains("attempts")) row.attempts = entry["attempts"].get<int>();
    row.note = entry.value("note", "");
    table.rows.push_back(std::move(row));
  }
  return table;
}

CampaignSpec load_campaign(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw SchemaError("campaign directory does not exist: " + dir.string());
  }
  CampaignSpec campaign;
  campaign.dir = dir;

  std::filesystem::path manifest = dir / "campaign.json";
  if (std::filesystem::exists(manifest)) {
    json obj = parse_json_file(manifest);
    campaign.seed_password = obj.value("seed_password", "");
    campaign.target_name = obj.value("target_name", "target");
  }

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (util::ends_with(entry.path().filename().string(), ".level.json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) campaign.levels.push_back(load_level(file));

  std::vector<std::string> seen;
  for (const auto& level : campaign.levels) {
    if (std::find(seen.begin(), seen.end(), level.id) != seen.end()) {
      throw SchemaError("duplicate level id '" + level.id + "' in " + dir.string());
    }
    seen.push_back(level.id);
  }
  return campaign;
}

}  // namespace aracne::bench
