#include "aracne/domain.hpp"

namespace aracne {

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::GoalReached: return "GoalReached";
    case Outcome::ActionBudgetExhausted: return "ActionBudgetExhausted";
    case Outcome::ProviderFailure: return "ProviderFailure";
    case Outcome::ConnectionFailure: return "ConnectionFailure";
    case Outcome::Aborted: return "Aborted";
  }
  return "Aborted";
}

std::optional<Outcome> outcome_from_string(const std::string& text) {
  if (text == "GoalReached") return Outcome::GoalReached;
  if (text == "ActionBudgetExhausted") return Outcome::ActionBudgetExhausted;
  if (text == "ProviderFailure") return Outcome::ProviderFailure;
  if (text == "ConnectionFailure") return Outcome::ConnectionFailure;
  if (text == "Aborted") return Outcome::Aborted;
  return std::nullopt;
}

}  // namespace aracne
