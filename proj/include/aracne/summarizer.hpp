#pragma once

#include <functional>
#include <string>

#include "aracne/domain.hpp"
#include "aracne/llm/gateway.hpp"

namespace aracne {

// Compresses the rendered context via the summarizer-role model. If the
// model exceeds config.summary_cap, it is re-prompted once with an explicit
// length instruction, then the result is hard-truncated. A summary that does
// not mention the goal (first 40 characters as substring) is reported through
// `warn` rather than rejected. Requires config.summarizer_enabled.
std::string summarize(const Goal& goal, const std::string& context_text, llm::Gateway& gateway,
                      const AgentConfig& config,
                      const std::function<void(const std::string&)>& warn = nullptr);

}  // namespace aracne
