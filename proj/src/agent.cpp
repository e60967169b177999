#include "aracne/agent.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include "aracne/context_store.hpp"
#include "aracne/errors.hpp"
#include "aracne/interpreter.hpp"
#include "aracne/planner.hpp"
#include "aracne/summarizer.hpp"
#include "aracne/util.hpp"

namespace aracne {

using nlohmann::json;
using std::chrono::duration_cast;
using std::chrono::milliseconds;
using std::chrono::steady_clock;

AttackLog::AttackLog(std::filesystem::path file, std::ostream* echo)
    : path_(std::move(file)), echo_(echo), started_(steady_clock::now()) {
  std::error_code ec;
  std::filesystem::create_directories(path_.parent_path(), ec);
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw PersistenceError("cannot open log file: " + path_.string());
}

void AttackLog::event(const std::string& kind, json fields) {
  fields["seq"] = seq_++;
  fields["kind"] = kind;
  fields["elapsed_ms"] = duration_cast<milliseconds>(steady_clock::now() - started_).count();
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw PersistenceError("cannot append to log file: " + path_.string());
  out << fields.dump() << "\n";
  out.flush();
  if (!out) throw PersistenceError("log write failed: " + path_.string());

  if (echo_ != nullptr) {
    std::string line = "[" + kind + "]";
    for (const char* key : {"text", "command", "output", "outcome", "note"}) {
      if (fields.contains(key) && fields[key].is_string()) {
        line += " " + fields[key].get<std::string>();
      }
    }
    (*echo_) << line << "\n";
    echo_->flush();
  }
}

std::filesystem::path attempt_dir(const std::filesystem::path& run_dir, int attempt_index) {
  return run_dir / ("attempt_" + std::to_string(attempt_index));
}

namespace {

struct LoopState {
  ContextStore* store;
  shell::Session* session;
  AttackLog* log;
  AttackTranscript* transcript;
  const Goal* goal;
  const AgentConfig* config;
  llm::Gateway* gateway;
  int actions = 0;
};

bool budget_full(const LoopState& state) {
  return state.config->max_actions && state.actions >= *state.config->max_actions;
}

// Executes one command as one action: run it, append the ContextRecord,
// log it, then summarize when enabled (the summarized context is what the
// next planner call sees).
void execute_action(LoopState& state, const AttackPlan& plan, const std::string& command) {
  CommandExecution execution;
  try {
    execution = state.session->execute(command, *state.config);
  } catch (const shell::HardTimeoutError& e) {
    execution = e.partial();
    state.log->event("note", {{"note", std::string("hard timeout: ") + e.what()}});
  }
  ++state.actions;

  ContextRecord record;
  record.iteration = state.store->last_iteration() + 1;
  record.previous_plan = plan;
  record.command = execution.command;
  record.output = execution.output;
  state.store->append_record(record);
  state.transcript->records.push_back(record);

  state.log->event("command", {{"command", execution.command}, {"iteration", record.iteration}});
  state.log->event("output", {{"output", execution.output},
                              {"truncated", execution.truncated},
                              {"wall_time_ms", execution.wall_time_ms},
                              {"iteration", record.iteration}});

  if (state.config->summarizer_enabled) {
    auto warn = [&state](const std::string& message) {
      state.log->event("note", {{"note", message}});
    };
    std::string summary =
        summarize(*state.goal, state.store->render(), *state.gateway, *state.config, warn);
    state.store->apply_summary(summary, state.store->last_iteration());
    state.log->event("summary", {{"text", summary}, {"cut", state.store->last_iteration()}});
  }
}

AttackPlan next_plan(LoopState& state) {
  AttackPlan accepted = plan(*state.goal, state.store->render(), *state.gateway, *state.config);
  json discarded = json::array();
  for (size_t i = 1; i < accepted.steps.size(); ++i) {
    discarded.push_back(accepted.steps[i].description);
  }
  // steps[1..] are logged for analysis but never executed: the next plan
  // supersedes them.
  state.log->event("plan", {{"text", serialize_plan(accepted)}, {"discarded_steps", discarded}});
  return accepted;
}

Outcome attack_loop(LoopState& state) {
  std::optional<AttackPlan> pending;
  while (true) {
    AttackPlan current = pending ? *pending : next_plan(state);
    pending.reset();

    if (current.goal_reached) {
      if (state.config->verification_policy == VerificationPolicy::TrustFlag) {
        state.log->event("verification", {{"policy", "trust_flag"}, {"confirmed", true}});
        return Outcome::GoalReached;
      }
      if (budget_full(state)) return Outcome::ActionBudgetExhausted;
      PlanStep verification_step{0, current.goal_verification};
      std::string command = to_command(verification_step, *state.gateway, *state.config);
      execute_action(state, current, command);
      AttackPlan confirmation = next_plan(state);
      state.log->event("verification", {{"policy", "execute_verification"},
                                        {"confirmed", confirmation.goal_reached}});
      if (confirmation.goal_reached) return Outcome::GoalReached;
      if (budget_full(state)) return Outcome::ActionBudgetExhausted;
      pending = std::move(confirmation);
      continue;
    }

    if (budget_full(state)) return Outcome::ActionBudgetExhausted;
    PlanStep step = first_step(current);
    std::string command = to_command(step, *state.gateway, *state.config);
    execute_action(state, current, command);
    if (budget_full(state)) return Outcome::ActionBudgetExhausted;
  }
}

void write_result(const std::filesystem::path& dir, const AttackTranscript& transcript) {
  json result = {
      {"outcome", to_string(transcript.outcome)},
      {"actions", transcript.actions},
      {"duration_ms", transcript.duration_ms},
      {"goal", transcript.goal.render()},
  };
  util::write_file((dir / "result.json").string(), result.dump(2) + "\n");
}

}  // namespace

AttackTranscript run_attack(const Goal& goal, const shell::Endpoint& endpoint,
                            const AgentConfig& config, llm::Gateway& gateway,
                            const std::filesystem::path& dir, int attempt_index,
                            std::ostream* echo) {
  if (util::trim(goal.text).empty()) {
    throw ContractViolation("run_attack: goal text is empty");
  }
  if (!config.role_models.count("planner") || !config.role_models.count("interpreter")) {
    throw ContractViolation("run_attack: planner and interpreter roles must be routed");
  }
  if (config.summarizer_enabled && !config.role_models.count("summarizer")) {
    throw ContractViolation("run_attack: summarizer enabled but not routed");
  }
  if (config.max_actions && *config.max_actions < 1) {
    throw ContractViolation("run_attack: max_actions must be positive when set");
  }
  std::filesystem::create_directories(dir);
  AttackLog log(dir / "attack.log", echo);

  AttackTranscript transcript;
  transcript.attempt_index = attempt_index;
  transcript.goal = goal;
  transcript.log_path = log.path();
  transcript.context_path = dir / "context.ndjson";

  auto started = steady_clock::now();
  log.event("goal", {{"text", goal.render()}, {"attempt", attempt_index}});

  ContextStore store(goal, transcript.context_path, config.summarizer_enabled);

  shell::Session session;
  try {
    session = shell::Session::connect(endpoint, config);
    log.event("connect", {{"host", endpoint.host},
                          {"port", endpoint.port},
                          {"user", endpoint.username},
                          {"prompt", session.prompt_pattern()}});
  } catch (const Error& e) {
    log.event("error", {{"note", e.what()}});
    transcript.outcome = Outcome::ConnectionFailure;
    transcript.duration_ms = duration_cast<milliseconds>(steady_clock::now() - started).count();
    log.event("outcome", {{"outcome", to_string(transcript.outcome)}, {"actions", 0}});
    write_result(dir, transcript);
    return transcript;
  }

  LoopState state{&store, &session, &log, &transcript, &goal, &config, &gateway};
  Outcome outcome;
  try {
    outcome = attack_loop(state);
  } catch (const ProviderError& e) {
    log.event("error", {{"note", e.what()}});
    outcome = Outcome::ProviderFailure;
  } catch (const PlanParseError& e) {
    log.event("error", {{"note", e.what()}});
    outcome = Outcome::ProviderFailure;
  } catch (const EmptyCommandError& e) {
    log.event("error", {{"note", e.what()}});
    outcome = Outcome::ProviderFailure;
  } catch (const UnknownRoleError& e) {
    log.event("error", {{"note", e.what()}});
    outcome = Outcome::ProviderFailure;
  } catch (const SessionClosedError& e) {
    log.event("error", {{"note", e.what()}});
    outcome = Outcome::ConnectionFailure;
  } catch (const TransportError& e) {
    log.event("error", {{"note", e.what()}});
    outcome = Outcome::ConnectionFailure;
  } catch (const PersistenceError& e) {
    log.event("error", {{"note", e.what()}});
    outcome = Outcome::Aborted;
  } catch (const CommandDeniedError& e) {
    log.event("error", {{"note", e.what()}});
    outcome = Outcome::Aborted;
  }
  session.close();

  transcript.outcome = outcome;
  transcript.actions = state.actions;
  transcript.duration_ms = duration_cast<milliseconds>(steady_clock::now() - started).count();
  log.event("outcome",
            {{"outcome", to_string(outcome)}, {"actions", transcript.actions}});
  write_result(dir, transcript);
  return transcript;
}

std::vector<AttackTranscript> run_attempts(const Goal& goal, const shell::Endpoint& endpoint,
                                           const AgentConfig& config, llm::Gateway& gateway,
                                           const std::filesystem::path& run_dir, int attempts,
                                           std::ostream* echo) {
  if (attempts < 1) throw ContractViolation("run_attempts: attempts must be >= 1");
  std::vector<AttackTranscript> transcripts;
  for (int k = 0; k < attempts; ++k) {
    AttackTranscript transcript =
        run_attack(goal, endpoint, config, gateway, attempt_dir(run_dir, k), k, echo);
    transcripts.push_back(transcript);
    if (transcript.outcome == Outcome::GoalReached) break;
  }
  return transcripts;
}

}  // namespace aracne
