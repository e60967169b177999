#pragma once

#include <string>

#include "aracne/domain.hpp"
#include "aracne/llm/gateway.hpp"

namespace aracne {

// Extracts the first balanced JSON object from raw model output (prose and
// code fences tolerated), then maps steps / goal_verification / goal_reached.
// Unknown fields are ignored; AttackPlan invariants are enforced.
// Throws PlanParseError with kind NoObjectFound, MissingField, WrongType or
// EmptyStepsWhileNotReached.
AttackPlan parse_plan(const std::string& raw);

// One planner-model call plus validation. On a parse failure the same bundle
// is re-sent once with a corrective instruction appended; a second failure
// propagates. goal_reached passes through untouched — the model can be wrong
// and the caller decides what to do about it.
AttackPlan plan(const Goal& goal, const std::string& context_text, llm::Gateway& gateway,
                const AgentConfig& config);

}  // namespace aracne
