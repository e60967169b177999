#include "aracne/interpreter.hpp"

#include "aracne/errors.hpp"
#include "aracne/util.hpp"

namespace aracne {

PlanStep first_step(const AttackPlan& plan) {
  if (plan.steps.empty()) throw EmptyPlanError("plan has no steps to execute");
  return plan.steps.front();
}

std::string sanitize_command(const std::string& raw) {
  std::vector<std::string> kept;
  for (const auto& line : util::split_lines(raw)) {
    std::string cleaned = util::trim(line);
    if (cleaned.empty()) continue;
    if (util::starts_with(cleaned, "```")) continue;  // fence line, possibly ```bash
    // Inline backticks are markup, never part of the intended command.
    std::string no_ticks;
    no_ticks.reserve(cleaned.size());
    for (char c : cleaned) {
      if (c != '`') no_ticks.push_back(c);
    }
    cleaned = util::trim(no_ticks);
    while (!cleaned.empty() && (cleaned.front() == '$' || cleaned.front() == '#')) {
      if (cleaned.size() > 1 && !std::isspace(static_cast<unsigned char>(cleaned[1]))) {
        break;  // "$HOME/bin/x" or "#!": glyph is part of the command
      }
      cleaned = util::ltrim(cleaned.substr(1));
    }
    if (cleaned.empty()) continue;
    kept.push_back(cleaned);
  }
  std::string command;
  for (size_t i = 0; i < kept.size(); ++i) {
    if (i > 0) command += " && ";
    command += kept[i];
  }
  return command;
}

std::string to_command(const PlanStep& step, llm::Gateway& gateway, const AgentConfig& config) {
  if (util::trim(step.description).empty()) {
    throw ContractViolation("to_command: step description is empty");
  }
  llm::PromptBundle bundle =
      gateway.build_prompt(llm::Role::Interpreter, Goal{}, step.description, config);
  llm::ProviderResponse response = gateway.complete(llm::Role::Interpreter, bundle, config);
  std::string command = sanitize_command(response.text);
  if (command.empty()) {
    throw EmptyCommandError("interpreter output sanitized to an empty command");
  }
  for (const auto& pattern : config.command_deny_patterns) {
    if (util::glob_match(pattern, command)) {
      throw CommandDeniedError("command matches deny pattern '" + pattern + "': " + command);
    }
  }
  return command;
}

}  // namespace aracne
