#include "aracne/bench/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <regex>

#include "aracne/agent.hpp"
#include "aracne/errors.hpp"
#include "aracne/sim/engine.hpp"
#include "aracne/sim/scenario.hpp"
#include "aracne/util.hpp"

namespace aracne::bench {

namespace {

std::string substitute_pwd(std::string text, const std::string& credential) {
  const std::string placeholder = "[pwd]";
  size_t pos;
  while ((pos = text.find(placeholder)) != std::string::npos) {
    text.replace(pos, placeholder.size(), credential);
  }
  return text;
}

struct ResolvedTarget {
  shell::Endpoint endpoint;
  std::shared_ptr<sim::SimServer> server;  // set for sim:// targets
};

ResolvedTarget resolve_target(const LevelSpec& spec, const std::string& credential) {
  ResolvedTarget resolved;
  if (util::starts_with(spec.target, "sim://")) {
    std::filesystem::path scenario_path = spec.target.substr(6);
    if (scenario_path.is_relative()) scenario_path = spec.base_dir / scenario_path;
    sim::Scenario scenario = sim::load_scenario(scenario_path);
    resolved.server = std::make_shared<sim::SimServer>(std::move(scenario));
    resolved.endpoint = sim::serve_in_process(resolved.server);
    resolved.endpoint.password = credential;
    return resolved;
  }
  if (util::starts_with(spec.target, "ssh://")) {
    std::string rest = spec.target.substr(6);
    size_t at = rest.find('@');
    if (at == std::string::npos) throw SchemaError("ssh target needs user@host: " + spec.target);
    resolved.endpoint.username = rest.substr(0, at);
    std::string host_port = rest.substr(at + 1);
    size_t colon = host_port.rfind(':');
    if (colon == std::string::npos) {
      resolved.endpoint.host = host_port;
    } else {
      resolved.endpoint.host = host_port.substr(0, colon);
      resolved.endpoint.port = std::atoi(host_port.substr(colon + 1).c_str());
    }
    resolved.endpoint.transport = shell::Transport::Ssh;
    resolved.endpoint.password = credential;
    return resolved;
  }
  throw SchemaError("unknown target scheme: " + spec.target);
}

bool evaluate_predicate(const SuccessPredicate& predicate, const AttackTranscript& transcript,
                        const ResolvedTarget& target) {
  switch (predicate.type) {
    case PredicateType::FlagInOutput:
      for (const auto& record : transcript.records) {
        if (record.output && record.output->find(predicate.value) != std::string::npos) {
          return true;
        }
      }
      return false;
    case PredicateType::OutputMatches: {
      std::regex pattern(predicate.value);
      for (const auto& record : transcript.records) {
        if (record.output && std::regex_search(*record.output, pattern)) return true;
      }
      return false;
    }
    case PredicateType::FileExists:
      // The sim command set cannot create files, so served scenario state is
      // the target state. Unsupported for remote targets.
      if (target.server) {
        const auto& fs = target.server->scenario().fs;
        return fs.find(predicate.value) != fs.end();
      }
      return false;
  }
  return false;
}

}  // namespace

LevelOutcome run_level(const LevelSpec& spec, const std::string& credential,
                       const RunOptions& options) {
  if (spec.unsuitable) throw ContractViolation("run_level called on an unsuitable level");
  if (options.gateway == nullptr) throw ContractViolation("run_level needs a gateway");

  Goal goal;
  goal.text = substitute_pwd(spec.goal_template, credential);
  goal.origin = GoalOrigin::Benchmark;
  if (spec.augmentation_rule) {
    goal.augmentation = substitute_pwd(*spec.augmentation_rule, credential);
  }

  LevelOutcome outcome;
  outcome.row.id = spec.id;
  outcome.row.status = LevelStatus::Done;

  ResolvedTarget target;
  try {
    target = resolve_target(spec, credential);
  } catch (const Error& e) {
    outcome.row.winner = Winner::Target;
    outcome.row.actions = spec.max_actions;
    outcome.row.attempts = spec.attempts;
    outcome.row.note = std::string("target unavailable: ") + e.what();
    return outcome;
  }

  AgentConfig config = options.agent_config;
  config.max_actions = spec.max_actions;

  std::vector<AttackTranscript> transcripts =
      run_attempts(goal, target.endpoint, config, *options.gateway,
                   options.run_dir / spec.id, spec.attempts, options.echo);

  const AttackTranscript* winning = nullptr;
  for (const auto& transcript : transcripts) {
    if (transcript.outcome == Outcome::GoalReached) {
      winning = &transcript;
      break;
    }
  }

  if (winning == nullptr) {
    outcome.row.winner = Winner::Target;
    outcome.row.actions = spec.max_actions;
    outcome.row.attempts = spec.attempts;
    bool all_connection_failures = true;
    for (const auto& transcript : transcripts) {
      if (transcript.outcome != Outcome::ConnectionFailure) all_connection_failures = false;
    }
    if (all_connection_failures) outcome.row.note = "target unreachable";
    return outcome;
  }

  if (!evaluate_predicate(spec.predicate, *winning, target)) {
    outcome.row.winner = Winner::Target;
    outcome.row.actions = spec.max_actions;
    outcome.row.attempts = spec.attempts;
    outcome.row.note = "false positive";
    return outcome;
  }

  outcome.row.winner = Winner::Agent;
  outcome.row.actions = winning->actions;
  outcome.row.attempts = winning->attempt_index;  // failed attempts before the win

  if (spec.flag_extraction) {
    std::regex pattern(*spec.flag_extraction);
    std::string all_output;
    for (const auto& record : winning->records) {
      if (record.output) all_output += *record.output + "\n";
    }
    std::smatch match;
    if (std::regex_search(all_output, match, pattern)) {
      outcome.harvested = match.size() > 1 ? match[1].str() : match[0].str();
    }
  }
  return outcome;
}

namespace {

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  char buffer[32];
  std::tm parts{};
  gmtime_r(&seconds, &parts);
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

}  // namespace

ResultTable run_campaign(const CampaignSpec& campaign, const RunOptions& options) {
  ResultTable table;
  table.target_name = campaign.target_name;
  table.metadata["campaign_dir"] = campaign.dir.string();
  table.metadata["levels"] = campaign.levels.size();
  table.metadata["started_at"] = iso_timestamp();
  {
    nlohmann::json models = nlohmann::json::object();
    for (const auto& [role, model] : options.agent_config.role_models) models[role] = model;
    table.metadata["role_models"] = models;
    table.metadata["summarizer_enabled"] = options.agent_config.summarizer_enabled;
  }

  std::string credential = campaign.seed_password;
  for (const auto& spec : campaign.levels) {
    if (spec.unsuitable) {
      LevelResult row;
      row.id = spec.id;
      row.status = LevelStatus::Unsuitable;
      row.winner = Winner::None;
      row.note = spec.unsuitable_reason;
      table.rows.push_back(row);
      if (spec.fallback_password) credential = *spec.fallback_password;
      continue;
    }

    LevelOutcome outcome = run_level(spec, credential, options);
    table.rows.push_back(outcome.row);

    if (outcome.row.winner == Winner::Agent) {
      if (spec.flag_extraction) {
        if (outcome.harvested) {
          credential = *outcome.harvested;
        } else if (spec.fallback_password) {
          credential = *spec.fallback_password;
        } else {
          table.metadata["halted"] =
              "flag extraction failed on won level '" + spec.id + "' and no fallback exists";
          break;
        }
      }
    } else {
      if (spec.fallback_password) credential = *spec.fallback_password;
    }
  }
  table.metadata["finished_at"] = iso_timestamp();
  return table;
}

}  // namespace aracne::bench
