#include "aracne/summarizer.hpp"

#include "aracne/errors.hpp"

namespace aracne {

std::string summarize(const Goal& goal, const std::string& context_text, llm::Gateway& gateway,
                      const AgentConfig& config,
                      const std::function<void(const std::string&)>& warn) {
  if (!config.summarizer_enabled) {
    throw ContractViolation("summarize called with summarizer disabled");
  }
  llm::PromptBundle bundle =
      gateway.build_prompt(llm::Role::Summarizer, goal, context_text, config);
  llm::ProviderResponse response = gateway.complete(llm::Role::Summarizer, bundle, config);
  std::string summary = response.text;

  if (summary.size() > config.summary_cap) {
    llm::PromptBundle shorter = bundle;
    shorter.payload += "\n\nYour previous summary was " + std::to_string(summary.size()) +
                       " characters long. It must be at most " +
                       std::to_string(config.summary_cap) +
                       " characters. Respond again within that limit.";
    llm::ProviderResponse retry = gateway.complete(llm::Role::Summarizer, shorter, config);
    summary = retry.text;
    if (summary.size() > config.summary_cap) {
      summary.resize(config.summary_cap);
    }
  }

  std::string goal_prefix = goal.text.substr(0, std::min<size_t>(40, goal.text.size()));
  if (!goal_prefix.empty() && summary.find(goal_prefix) == std::string::npos && warn) {
    warn("summary does not mention the goal");
  }
  return summary;
}

}  // namespace aracne
