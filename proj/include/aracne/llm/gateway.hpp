#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "aracne/domain.hpp"

namespace aracne::llm {

enum class Role { Planner, Interpreter, Summarizer };

const char* role_name(Role role);

// Assembled prompt parts. The preamble (the "Play as..." framing) always
// precedes everything else in the serialized prompt.
struct PromptBundle {
  std::string preamble;
  std::string instructions;
  std::string payload;
  std::string response_schema_hint;
};

std::string serialize_prompt(const PromptBundle& bundle);

struct ProviderResponse {
  std::string text;
  bool refused = false;
  std::int64_t latency_ms = 0;
};

struct PromptRecord {
  std::string model;
  std::string prompt;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderResponse complete(const std::string& model, const std::string& prompt,
                                    const AgentConfig& config) = 0;
};

// Deterministic test double: hands out canned responses in order and records
// every prompt it receives. Responses can be shared or keyed per model name;
// loop mode cycles the queue instead of exhausting it.
class ScriptedProvider : public Provider {
 public:
  ScriptedProvider() = default;
  explicit ScriptedProvider(std::vector<std::string> responses, bool loop = false);

  void push(std::string response);
  void push_for_model(const std::string& model, std::string response);
  void set_loop(bool loop) { loop_ = loop; }

  ProviderResponse complete(const std::string& model, const std::string& prompt,
                            const AgentConfig& config) override;

  std::vector<PromptRecord> prompts() const;
  std::vector<std::string> prompts_for_model(const std::string& model) const;
  size_t call_count() const;

 private:
  struct Queue {
    std::vector<std::string> responses;
    size_t next = 0;
  };

  std::string pop(Queue& queue, const std::string& model);

  mutable std::mutex mutex_;
  Queue shared_;
  std::map<std::string, Queue> by_model_;
  bool loop_ = false;
  std::vector<PromptRecord> prompts_;
};

// Per-role jailbreak preambles. Operator-editable files named
// prompts/<role>.txt override the built-in defaults.
struct PromptTemplates {
  std::string planner;
  std::string interpreter;
  std::string summarizer;

  static PromptTemplates defaults();
  static PromptTemplates load(const std::filesystem::path& dir);
  const std::string& preamble(Role role) const;
};

// Deterministic prompt assembly per role. Planner bundles carry the goal and
// the JSON plan contract, interpreter bundles exactly one step description,
// summarizer bundles the full rendered context plus the length budget.
PromptBundle build_prompt(Role role, const Goal& goal, const std::string& payload,
                          const PromptTemplates& templates, const AgentConfig& config);

// Uniform completion interface over the configured providers. Model ids look
// like "provider/model"; the prefix picks the registered provider. Refusals
// (phrase-list heuristic) and transport errors retry with the same bundle up
// to config.retry_budget, so at most 1 + retry_budget calls go out.
class Gateway {
 public:
  Gateway() : templates_(PromptTemplates::defaults()) {}
  explicit Gateway(PromptTemplates templates) : templates_(std::move(templates)) {}

  void register_provider(const std::string& name, std::shared_ptr<Provider> provider);
  std::shared_ptr<Provider> provider(const std::string& name) const;

  ProviderResponse complete(Role role, const PromptBundle& bundle, const AgentConfig& config);

  PromptBundle build_prompt(Role role, const Goal& goal, const std::string& payload,
                            const AgentConfig& config) const;

  const PromptTemplates& templates() const { return templates_; }

 private:
  PromptTemplates templates_;
  std::map<std::string, std::shared_ptr<Provider>> providers_;
};

bool looks_like_refusal(const std::string& text, const std::vector<std::string>& phrases);

// Splits "provider/model" into the provider key and the model remainder.
// Without a slash the whole id doubles as both.
std::pair<std::string, std::string> split_model_id(const std::string& model_id);

// The run configuration file: provider registry, optional per-role model
// routing and an optional prompt-template directory:
//   {"providers": {"<name>": {"type": "openai-chat"|"scripted", ...}},
//    "role_models": {"planner": "script/planner", ...},
//    "prompt_dir": "prompts"}
struct RunConfig {
  Gateway gateway;
  std::map<std::string, std::string> role_models;  // empty entries keep defaults
  std::filesystem::path prompt_dir;
};

RunConfig load_run_config(const std::filesystem::path& provider_config);

}  // namespace aracne::llm
