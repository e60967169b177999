#pragma once

#include <string>

#include "aracne/domain.hpp"
#include "aracne/llm/gateway.hpp"

namespace aracne {

// steps[0] of the current plan; the rest is never executed this iteration
// (the next plan supersedes it). Throws EmptyPlanError.
PlanStep first_step(const AttackPlan& plan);

// Pure sanitizer for interpreter-model output: drops code-fence lines,
// removes backticks, strips leading shell-prompt glyphs ($, #) per line and
// joins surviving lines with " && " so exactly one single-line command comes
// out. Token order is preserved. May return "".
std::string sanitize_command(const std::string& raw);

// One interpreter-model call plus sanitization and the deny-list hook.
// Throws EmptyCommandError when nothing survives sanitization and
// CommandDeniedError when the result matches config.command_deny_patterns.
std::string to_command(const PlanStep& step, llm::Gateway& gateway, const AgentConfig& config);

}  // namespace aracne
