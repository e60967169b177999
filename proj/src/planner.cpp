#include "aracne/planner.hpp"

#include <nlohmann/json.hpp>

#include "aracne/errors.hpp"
#include "aracne/util.hpp"

namespace aracne {

using nlohmann::json;

namespace {

// Returns the first substring of text that is a balanced, parseable JSON
// object, or nullopt. Balancing honors string literals and escapes, so
// braces inside step descriptions do not confuse the scan.
std::optional<std::string> first_json_object(const std::string& text) {
  size_t search_from = 0;
  while (true) {
    size_t start = text.find('{', search_from);
    if (start == std::string::npos) return std::nullopt;
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (size_t i = start; i < text.size(); ++i) {
      char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth == 0) {
          std::string candidate = text.substr(start, i - start + 1);
          if (json::accept(candidate)) return candidate;
          break;  // balanced but unparseable; resume after this '{'
        }
      }
    }
    search_from = start + 1;
  }
}

[[noreturn]] void missing(const char* field) {
  throw PlanParseError(PlanParseError::Kind::MissingField, field,
                       std::string("plan is missing field '") + field + "'");
}

[[noreturn]] void wrong_type(const char* field, const std::string& detail) {
  throw PlanParseError(PlanParseError::Kind::WrongType, field,
                       std::string("plan field '") + field + "' " + detail);
}

}  // namespace

AttackPlan parse_plan(const std::string& raw) {
  auto object_text = first_json_object(raw);
  if (!object_text) {
    throw PlanParseError(PlanParseError::Kind::NoObjectFound, "",
                         "no JSON object found in planner output");
  }
  json obj = json::parse(*object_text);

  if (!obj.contains("steps")) missing("steps");
  if (!obj.contains("goal_verification")) missing("goal_verification");
  if (!obj.contains("goal_reached")) missing("goal_reached");

  const json& steps = obj["steps"];
  if (!steps.is_array()) wrong_type("steps", "must be a list of strings");
  AttackPlan plan;
  int ordinal = 0;
  for (const auto& step : steps) {
    if (!step.is_string()) wrong_type("steps", "must be a list of strings");
    std::string description = step.get<std::string>();
    if (util::trim(description).empty()) wrong_type("steps", "contains an empty action");
    plan.steps.push_back(PlanStep{ordinal++, std::move(description)});
  }

  const json& verification = obj["goal_verification"];
  if (!verification.is_string()) wrong_type("goal_verification", "must be a string");
  plan.goal_verification = verification.get<std::string>();
  if (util::trim(plan.goal_verification).empty()) {
    wrong_type("goal_verification", "must be non-empty");
  }

  const json& reached = obj["goal_reached"];
  if (!reached.is_boolean()) wrong_type("goal_reached", "must be a boolean");
  plan.goal_reached = reached.get<bool>();

  if (plan.steps.empty() && !plan.goal_reached) {
    throw PlanParseError(PlanParseError::Kind::EmptyStepsWhileNotReached, "steps",
                         "plan has no steps but goal_reached is false");
  }
  return plan;
}

AttackPlan plan(const Goal& goal, const std::string& context_text, llm::Gateway& gateway,
                const AgentConfig& config) {
  llm::PromptBundle bundle = gateway.build_prompt(llm::Role::Planner, goal, context_text, config);
  llm::ProviderResponse response = gateway.complete(llm::Role::Planner, bundle, config);
  try {
    return parse_plan(response.text);
  } catch (const PlanParseError& first_error) {
    llm::PromptBundle corrective = bundle;
    corrective.payload +=
        "\n\nYour previous response could not be used (" + std::string(first_error.what()) +
        "). Respond again with exactly one JSON object containing the fields \"steps\", "
        "\"goal_verification\" and \"goal_reached\", and nothing else.";
    llm::ProviderResponse retry = gateway.complete(llm::Role::Planner, corrective, config);
    return parse_plan(retry.text);
  }
}

}  // namespace aracne
