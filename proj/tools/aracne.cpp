#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aracne/agent.hpp"
#include "aracne/bench/report.hpp"
#include "aracne/bench/runner.hpp"
#include "aracne/bench/stats.hpp"
#include "aracne/errors.hpp"
#include "aracne/sim/engine.hpp"
#include "aracne/sim/scenario.hpp"
#include "aracne/sim/tcp_server.hpp"
#include "aracne/util.hpp"

namespace {

using namespace aracne;
using nlohmann::json;

constexpr int kExitWin = 0;
constexpr int kExitLoss = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitUnavailable = 69;

std::atomic<bool> interrupted{false};

void handle_signal(int) { interrupted = true; }

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return kExitUsage;
}

std::string default_run_dir(const std::string& kind) {
  if (const char* env = std::getenv("ARACNE_RUN_DIR")) return env;
  auto now = std::chrono::system_clock::now().time_since_epoch();
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(now).count();
  return "runs/" + kind + "_" + std::to_string(seconds);
}

struct TargetSpec {
  shell::Endpoint endpoint;
  std::shared_ptr<sim::SimServer> server;  // kept alive for sim targets
};

// A sim:// reference is a scenario file path, or a bare name resolved
// against ./ and ./scenarios/ with the .scn suffix.
std::filesystem::path resolve_scenario_path(const std::string& reference) {
  namespace fs = std::filesystem;
  if (fs::exists(reference)) return reference;
  for (const auto& candidate :
       {fs::path(reference + ".scn"), fs::path("scenarios") / (reference + ".scn"),
        fs::path("scenarios") / reference}) {
    if (fs::exists(candidate)) return candidate;
  }
  return reference;  // let load_scenario report the miss
}

// sim://<scenario> serves in-process; ssh://user@host:port goes over the
// wire with the password taken from ARACNE_SSH_PASSWORD.
TargetSpec resolve_target(const std::string& target) {
  TargetSpec resolved;
  if (util::starts_with(target, "sim://")) {
    sim::Scenario scenario = sim::load_scenario(resolve_scenario_path(target.substr(6)));
    resolved.server = std::make_shared<sim::SimServer>(std::move(scenario));
    resolved.endpoint = sim::serve_in_process(resolved.server);
    return resolved;
  }
  if (util::starts_with(target, "ssh://")) {
    std::string rest = target.substr(6);
    size_t at = rest.find('@');
    if (at == std::string::npos) throw SchemaError("ssh target needs user@host: " + target);
    resolved.endpoint.username = rest.substr(0, at);
    std::string host_port = rest.substr(at + 1);
    size_t colon = host_port.rfind(':');
    if (colon == std::string::npos) {
      resolved.endpoint.host = host_port;
    } else {
      resolved.endpoint.host = host_port.substr(0, colon);
      resolved.endpoint.port = std::atoi(host_port.substr(colon + 1).c_str());
    }
    if (const char* password = std::getenv("ARACNE_SSH_PASSWORD")) {
      resolved.endpoint.password = password;
    }
    resolved.endpoint.transport = shell::Transport::Ssh;
    return resolved;
  }
  throw SchemaError("unknown target scheme: " + target);
}

struct CommonFlags {
  std::string provider_config;
  std::string summarizer = "off";
  std::string verify = "exec";
  std::string planner_model;
  std::string interpreter_model;
  std::string summarizer_model;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--provider-config", flags.provider_config,
                  "Run configuration file (providers, role models, prompt dir)");
  cmd->add_option("--summarizer", flags.summarizer, "on|off (default off)")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--verify", flags.verify, "exec|trust (default exec)")
      ->check(CLI::IsMember({"exec", "trust"}));
  cmd->add_option("--planner-model", flags.planner_model, "provider/model for the planner");
  cmd->add_option("--interpreter-model", flags.interpreter_model,
                  "provider/model for the interpreter");
  cmd->add_option("--summarizer-model", flags.summarizer_model,
                  "provider/model for the summarizer");
}

void apply_timing_env(AgentConfig& config) {
  auto from_env = [](const char* name, std::int64_t& out) {
    if (const char* value = std::getenv(name)) {
      std::int64_t parsed = std::atoll(value);
      if (parsed > 0) out = parsed;
    }
  };
  from_env("ARACNE_QUIET_MS", config.quiet_ms);
  from_env("ARACNE_SETTLE_MS", config.settle_ms);
  from_env("ARACNE_COMMAND_TIMEOUT_MS", config.command_timeout_ms);
  from_env("ARACNE_CONNECT_TIMEOUT_MS", config.connect_timeout_ms);
}

// Gateway plus AgentConfig from the config file and CLI overrides.
std::pair<llm::RunConfig, AgentConfig> build_run(const CommonFlags& flags) {
  llm::RunConfig run_config = llm::load_run_config(flags.provider_config);
  AgentConfig config;
  apply_timing_env(config);
  for (const auto& [role, model] : run_config.role_models) config.role_models[role] = model;
  if (!flags.planner_model.empty()) config.role_models["planner"] = flags.planner_model;
  if (!flags.interpreter_model.empty()) config.role_models["interpreter"] = flags.interpreter_model;
  if (!flags.summarizer_model.empty()) config.role_models["summarizer"] = flags.summarizer_model;
  config.summarizer_enabled = flags.summarizer == "on";
  config.verification_policy = flags.verify == "trust" ? VerificationPolicy::TrustFlag
                                                       : VerificationPolicy::ExecuteVerification;
  return {std::move(run_config), std::move(config)};
}

int cmd_attack(const std::string& goal_text, const std::string& goal_file,
               const std::string& target, int max_actions, int attempts,
               const std::string& run_dir_flag, const CommonFlags& flags) {
  Goal goal;
  if (!goal_text.empty()) {
    goal.text = goal_text;
  } else if (!goal_file.empty()) {
    try {
      goal.text = util::trim(util::read_file(goal_file));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitData;
    }
  }
  if (util::trim(goal.text).empty()) {
    return usage_error("a goal is required (--goal or --goal-file)");
  }

  TargetSpec resolved;
  try {
    if (!target.empty()) {
      resolved = resolve_target(target);
    } else {
      resolved.endpoint = shell::endpoint_from_env();
      if (resolved.endpoint.host.empty()) {
        return usage_error("no target: pass --target or set ARACNE_SSH_HOST");
      }
    }
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  if (resolved.endpoint.transport == shell::Transport::Ssh &&
      (resolved.endpoint.username.empty() || resolved.endpoint.password.empty())) {
    return usage_error("missing credentials: set ARACNE_SSH_USER / ARACNE_SSH_PASSWORD");
  }

  auto [run_config, config] = build_run(flags);
  if (max_actions != 0) {
    if (max_actions < 1) return usage_error("--max-actions must be positive");
    config.max_actions = max_actions;
  }
  if (attempts < 1) return usage_error("--attempts must be >= 1");

  std::filesystem::path run_dir = run_dir_flag.empty()
                                      ? std::filesystem::path(default_run_dir("attack"))
                                      : std::filesystem::path(run_dir_flag);

  auto transcripts = run_attempts(goal, resolved.endpoint, config, run_config.gateway, run_dir,
                                  attempts, &std::cout);
  bool won = false;
  for (const auto& transcript : transcripts) {
    if (transcript.outcome == Outcome::GoalReached) won = true;
  }
  std::cout << "run directory: " << run_dir.string() << "\n";
  return won ? kExitWin : kExitLoss;
}

int cmd_bench(const std::string& campaign_dir, const std::string& run_dir_flag,
              const std::string& baseline_file, const std::string& levels_range,
              double reference_rate, bool has_reference, const CommonFlags& flags) {
  bench::CampaignSpec campaign;
  try {
    campaign = bench::load_campaign(campaign_dir);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }

  if (!levels_range.empty()) {
    size_t dots = levels_range.find("..");
    if (dots == std::string::npos) return usage_error("--levels wants a range like 0..3");
    int lo = std::atoi(levels_range.substr(0, dots).c_str());
    int hi = std::atoi(levels_range.substr(dots + 2).c_str());
    if (lo < 0 || hi < lo || hi >= static_cast<int>(campaign.levels.size())) {
      return usage_error("--levels range out of bounds");
    }
    std::vector<bench::LevelSpec> subset(campaign.levels.begin() + lo,
                                         campaign.levels.begin() + hi + 1);
    campaign.levels = std::move(subset);
  }

  bench::ReportOptions report_options;
  bench::ResultTable baseline;
  if (!baseline_file.empty()) {
    try {
      baseline = bench::load_results(baseline_file);
    } catch (const SchemaError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitData;
    }
    report_options.baseline = &baseline;
  }
  if (has_reference) report_options.reference_rate = reference_rate;

  auto [run_config, config] = build_run(flags);
  bench::RunOptions options;
  options.agent_config = config;
  options.gateway = &run_config.gateway;
  options.run_dir = run_dir_flag.empty() ? std::filesystem::path(default_run_dir("bench"))
                                         : std::filesystem::path(run_dir_flag);
  std::filesystem::create_directories(options.run_dir);

  bench::ResultTable table = bench::run_campaign(campaign, options);

  std::string report;
  try {
    report = bench::render_report(table, report_options);
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  bench::save_results(table, options.run_dir / "results.json");
  util::write_file((options.run_dir / "report.md").string(), report);
  std::cout << report;
  std::cout << "results: " << (options.run_dir / "results.json").string() << "\n";

  if (table.metadata.contains("halted")) {
    std::cerr << "campaign halted: " << table.metadata["halted"].get<std::string>() << "\n";
    return kExitLoss;
  }
  return kExitWin;
}

int cmd_serve(const std::string& scenario_file, int port, const std::string& transport) {
  if (transport == "in-process") {
    return usage_error("--transport in-process is meaningless for serve; use tcp");
  }
  if (transport != "tcp") return usage_error("unknown transport: " + transport);

  sim::Scenario scenario;
  try {
    scenario = sim::load_scenario(scenario_file);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }

  std::string user = scenario.username();
  sim::LoopbackServer server(std::move(scenario));
  try {
    server.start(port);
  } catch (const TransportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnavailable;
  }

  std::cout << "ssh://" << user << "@127.0.0.1:" << server.port() << "\n";
  std::cout.flush();

  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  while (!interrupted.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  server.stop();
  return kExitWin;
}

json load_log(const std::filesystem::path& file) {
  json events = json::array();
  for (const auto& line : util::split_lines(util::read_file(file.string()))) {
    if (line.empty()) continue;
    events.push_back(json::parse(line));
  }
  return events;
}

void print_attempt(const std::filesystem::path& dir, const json& events) {
  std::cout << "=== " << dir.filename().string() << " ===\n";
  for (const auto& event : events) {
    std::string kind = event.value("kind", "");
    if (kind == "goal") {
      std::cout << "goal: " << event.value("text", "") << "\n";
    } else if (kind == "plan") {
      std::cout << "  plan: " << event.value("text", "") << "\n";
    } else if (kind == "command") {
      std::cout << "  $ " << event.value("command", "") << "\n";
    } else if (kind == "output") {
      for (const auto& line : util::split_lines(event.value("output", ""))) {
        std::cout << "    " << line << "\n";
      }
    } else if (kind == "summary") {
      std::cout << "  summary: " << event.value("text", "") << "\n";
    } else if (kind == "error" || kind == "note") {
      std::cout << "  note: " << event.value("note", "") << "\n";
    } else if (kind == "outcome") {
      std::cout << "outcome: " << event.value("outcome", "") << " after "
                << event.value("actions", 0) << " action(s)\n";
    }
  }
}

int cmd_replay(const std::string& run_dir, int attempt, bool as_json) {
  std::filesystem::path dir(run_dir);
  if (!std::filesystem::is_directory(dir)) {
    std::cerr << "error: no such run directory: " << run_dir << "\n";
    return kExitData;
  }
  std::vector<std::filesystem::path> attempt_dirs;
  for (int k = 0;; ++k) {
    auto candidate = attempt_dir(dir, k);
    if (!std::filesystem::is_directory(candidate)) break;
    attempt_dirs.push_back(candidate);
  }
  if (attempt_dirs.empty() && std::filesystem::exists(dir / "attack.log")) {
    attempt_dirs.push_back(dir);  // a bare single-attempt directory
  }
  if (attempt_dirs.empty()) {
    std::cerr << "error: no attempts under " << run_dir << "\n";
    return kExitData;
  }
  if (attempt >= 0) {
    if (attempt >= static_cast<int>(attempt_dirs.size())) {
      std::cerr << "error: attempt " << attempt << " not found\n";
      return kExitData;
    }
    attempt_dirs = {attempt_dirs[static_cast<size_t>(attempt)]};
  }

  json all = json::array();
  for (const auto& attempt_path : attempt_dirs) {
    json events;
    try {
      events = load_log(attempt_path / "attack.log");
    } catch (const std::exception& e) {
      std::cerr << "error: corrupt log in " << attempt_path.string() << ": " << e.what() << "\n";
      return kExitData;
    }
    if (as_json) {
      all.push_back(json{{"attempt", attempt_path.filename().string()}, {"events", events}});
    } else {
      print_attempt(attempt_path, events);
    }
  }
  if (as_json) std::cout << all.dump(2) << "\n";
  return kExitWin;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aracne: autonomous shell-attack agent, simulator and benchmark harness"};
  app.require_subcommand(1);

  // attack
  auto* attack = app.add_subcommand("attack", "Run one autonomous attack against a target");
  std::string goal_text, goal_file, target, attack_run_dir;
  int max_actions = 0, attempts = 1;
  CommonFlags attack_flags;
  attack->add_option("--goal", goal_text, "Objective text");
  attack->add_option("--goal-file", goal_file, "File holding the objective text");
  attack->add_option("--target", target, "sim://<scenario> or ssh://user@host:port");
  attack->add_option("--max-actions", max_actions, "Stop after this many commands");
  attack->add_option("--attempts", attempts, "Independent attempts (fresh session each)");
  attack->add_option("--run-dir", attack_run_dir, "Where logs and context files go");
  add_common_flags(attack, attack_flags);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run a leveled benchmark campaign");
  std::string campaign_dir, bench_run_dir, baseline_file, levels_range;
  double reference_rate = 0.0;
  CommonFlags bench_flags;
  bench_cmd->add_option("--campaign", campaign_dir, "Campaign directory")->required();
  bench_cmd->add_option("--run-dir", bench_run_dir, "Where results and reports go");
  bench_cmd->add_option("--baseline", baseline_file, "Prior results.json for delta annotations");
  bench_cmd->add_option("--levels", levels_range, "Subset range, e.g. 0..3");
  auto* reference_option = bench_cmd->add_option("--reference-rate", reference_rate,
                                                 "Reference success rate for the report footer");
  add_common_flags(bench_cmd, bench_flags);

  // serve
  auto* serve = app.add_subcommand("serve", "Serve a simulated target on loopback");
  std::string scenario_file, serve_transport = "tcp";
  int serve_port = 0;
  serve->add_option("--scenario", scenario_file, "Scenario file")->required();
  serve->add_option("--port", serve_port, "Port (0 = ephemeral)");
  serve->add_option("--transport", serve_transport, "tcp (in-process is rejected)");

  // replay
  auto* replay = app.add_subcommand("replay", "Pretty-print a recorded run");
  std::string replay_dir;
  int replay_attempt = -1;
  bool replay_json = false;
  replay->add_option("--run-dir", replay_dir, "Run directory")->required();
  replay->add_option("--attempt", replay_attempt, "Only this attempt");
  replay->add_flag("--json", replay_json, "Machine-readable timeline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (attack->parsed()) {
      return cmd_attack(goal_text, goal_file, target, max_actions, attempts, attack_run_dir,
                        attack_flags);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(campaign_dir, bench_run_dir, baseline_file, levels_range, reference_rate,
                       reference_option->count() > 0, bench_flags);
    }
    if (serve->parsed()) {
      return cmd_serve(scenario_file, serve_port, serve_transport);
    }
    if (replay->parsed()) {
      return cmd_replay(replay_dir, replay_attempt, replay_json);
    }
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
