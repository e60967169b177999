#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aracne/domain.hpp"
#include "aracne/llm/gateway.hpp"

#ifndef ARACNE_SOURCE_DIR
#define ARACNE_SOURCE_DIR "."
#endif

namespace testsupport {

inline std::filesystem::path source_dir() { return ARACNE_SOURCE_DIR; }

inline std::filesystem::path fixture(const std::string& relative) {
  return source_dir() / relative;
}

// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::atomic<int> counter{0};
    auto base = std::filesystem::temp_directory_path();
    path = base / ("aracne-test-" + std::to_string(::getpid()) + "-" +
                   std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

// Gateway wired to one scripted provider registered under "script", with the
// provider handle kept for pushing responses and reading prompt recordings.
struct ScriptedGateway {
  aracne::llm::Gateway gateway;
  std::shared_ptr<aracne::llm::ScriptedProvider> provider;

  explicit ScriptedGateway(aracne::llm::PromptTemplates templates =
                               aracne::llm::PromptTemplates::defaults())
      : gateway(std::move(templates)),
        provider(std::make_shared<aracne::llm::ScriptedProvider>()) {
    gateway.register_provider("script", provider);
  }
};

// Fast timings for simulator-backed tests; role models routed to "script".
inline aracne::AgentConfig test_config() {
  aracne::AgentConfig config;
  config.role_models = {
      {"planner", "script/planner"},
      {"interpreter", "script/interpreter"},
      {"summarizer", "script/summarizer"},
  };
  config.retry_budget = 2;
  config.quiet_ms = 100;
  config.settle_ms = 5;
  config.command_timeout_ms = 3'000;
  config.connect_timeout_ms = 3'000;
  return config;
}

inline std::string plan_json(const std::vector<std::string>& steps,
                             const std::string& verification, bool reached) {
  nlohmann::json obj = {
      {"steps", steps},
      {"goal_verification", verification},
      {"goal_reached", reached},
  };
  return obj.dump();
}

}  // namespace testsupport
