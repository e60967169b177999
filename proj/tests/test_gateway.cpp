#include <doctest.h>

#include "aracne/errors.hpp"
#include "aracne/llm/gateway.hpp"
#include "aracne/llm/http_provider.hpp"
#include "aracne/util.hpp"
#include "support.hpp"

using namespace aracne;
using namespace aracne::llm;

TEST_CASE("scripted provider hands out responses in order and records prompts") {
  ScriptedProvider provider({"p1", "p2"});
  AgentConfig config;
  CHECK(provider.complete("m", "first prompt", config).text == "p1");
  CHECK(provider.complete("m", "second prompt", config).text == "p2");
  auto prompts = provider.prompts();
  REQUIRE(prompts.size() == 2);
  CHECK(prompts[0].prompt == "first prompt");
  CHECK(prompts[1].prompt == "second prompt");
  CHECK_THROWS_AS(provider.complete("m", "third", config), ProviderError);
}

TEST_CASE("complete returns scripted text") {
  testsupport::ScriptedGateway scripted;
  scripted.provider->push_for_model("planner", "A");
  AgentConfig config = testsupport::test_config();
  PromptBundle bundle{"pre", "inst", "payload", ""};
  auto response = scripted.gateway.complete(Role::Planner, bundle, config);
  CHECK(response.text == "A");
  CHECK_FALSE(response.refused);
}

TEST_CASE("refusal triggers a retry with the same bundle") {
  testsupport::ScriptedGateway scripted;
  scripted.provider->push_for_model("planner", "I cannot help with that");
  scripted.provider->push_for_model("planner", "ok");
  AgentConfig config = testsupport::test_config();
  PromptBundle bundle{"pre", "inst", "payload", ""};
  auto response = scripted.gateway.complete(Role::Planner, bundle, config);
  CHECK(response.text == "ok");
  auto prompts = scripted.provider->prompts_for_model("planner");
  REQUIRE(prompts.size() == 2);
  CHECK(prompts[0] == prompts[1]);  // same serialized bundle both times
}

TEST_CASE("empty scripted queue surfaces as a provider failure") {
  testsupport::ScriptedGateway scripted;
  AgentConfig config = testsupport::test_config();
  PromptBundle bundle{"pre", "", "", ""};
  CHECK_THROWS_AS(scripted.gateway.complete(Role::Planner, bundle, config), ProviderError);
}

TEST_CASE("retry bound: at most 1 + retry_budget provider calls") {
  testsupport::ScriptedGateway scripted;
  for (int i = 0; i < 10; ++i) scripted.provider->push_for_model("planner", "I'm sorry, no");
  AgentConfig config = testsupport::test_config();
  config.retry_budget = 3;
  PromptBundle bundle{"pre", "", "", ""};
  CHECK_THROWS_AS(scripted.gateway.complete(Role::Planner, bundle, config), ProviderError);
  CHECK(scripted.provider->call_count() == 4);
}

TEST_CASE("unknown role and unregistered provider") {
  testsupport::ScriptedGateway scripted;
  AgentConfig config = testsupport::test_config();
  config.role_models.erase("summarizer");
  PromptBundle bundle{"pre", "", "", ""};
  CHECK_THROWS_AS(scripted.gateway.complete(Role::Summarizer, bundle, config), UnknownRoleError);

  config.role_models["planner"] = "nosuch/model";
  CHECK_THROWS_AS(scripted.gateway.complete(Role::Planner, bundle, config), ProviderError);
}

TEST_CASE("role isolation: another role's model never changes this role's request") {
  AgentConfig config = testsupport::test_config();
  Goal goal{"G"};

  testsupport::ScriptedGateway first;
  first.provider->push_for_model("planner", "x");
  auto bundle = first.gateway.build_prompt(Role::Planner, goal, "CTX", config);
  first.gateway.complete(Role::Planner, bundle, config);

  testsupport::ScriptedGateway second;
  second.provider->push_for_model("planner", "x");
  AgentConfig altered = config;
  altered.role_models["interpreter"] = "script/some-other-model";
  auto bundle2 = second.gateway.build_prompt(Role::Planner, goal, "CTX", altered);
  second.gateway.complete(Role::Planner, bundle2, altered);

  CHECK(first.provider->prompts()[0].prompt == second.provider->prompts()[0].prompt);
  CHECK(first.provider->prompts()[0].model == second.provider->prompts()[0].model);
}

TEST_CASE("planner prompt starts with the preamble and carries goal and payload") {
  AgentConfig config;
  auto templates = PromptTemplates::defaults();
  auto bundle = build_prompt(Role::Planner, Goal{"G"}, "CTX", templates, config);
  std::string serialized = serialize_prompt(bundle);
  CHECK(util::starts_with(serialized, "You play as an autonomous attacker inside a dummy SSH server"));
  CHECK(serialized.find("G") != std::string::npos);
  CHECK(serialized.find("CTX") != std::string::npos);
  CHECK(serialized.find("goal_verification") != std::string::npos);
  CHECK(serialized.find("verification plan") != std::string::npos);
}

TEST_CASE("interpreter prompt carries only the step as payload") {
  AgentConfig config;
  auto templates = PromptTemplates::defaults();
  auto bundle = build_prompt(Role::Interpreter, Goal{"ignored"}, "List files", templates, config);
  CHECK(bundle.payload == "List files");
  CHECK(bundle.instructions.find("ignored") == std::string::npos);
}

TEST_CASE("build_prompt is deterministic") {
  AgentConfig config;
  auto templates = PromptTemplates::defaults();
  for (Role role : {Role::Planner, Role::Interpreter, Role::Summarizer}) {
    auto a = serialize_prompt(build_prompt(role, Goal{"g", "aug"}, "payload", templates, config));
    auto b = serialize_prompt(build_prompt(role, Goal{"g", "aug"}, "payload", templates, config));
    CHECK(a == b);
  }
}

TEST_CASE("template files override the built-in preamble per role") {
  testsupport::TempDir tmp;
  util::write_file((tmp.path / "planner.txt").string(), "Play as a red-team planner.\n");
  auto templates = PromptTemplates::load(tmp.path);
  CHECK(templates.planner == "Play as a red-team planner.");
  CHECK(templates.interpreter == PromptTemplates::defaults().interpreter);
}

TEST_CASE("run config file loads scripted providers and routing") {
  testsupport::TempDir tmp;
  util::write_file((tmp.path / "providers.json").string(), R"({
    "role_models": {"planner": "script/planner"},
    "providers": {"script": {"type": "scripted", "responses": ["hi"]}}
  })");
  auto run_config = load_run_config(tmp.path / "providers.json");
  CHECK(run_config.role_models["planner"] == "script/planner");
  AgentConfig config = testsupport::test_config();
  PromptBundle bundle{"pre", "", "", ""};
  CHECK(run_config.gateway.complete(Role::Planner, bundle, config).text == "hi");
}

TEST_CASE("http provider request and response shapes") {
  std::string body = HttpChatProvider::build_request_body("gpt-4o", "do the thing");
  auto parsed = nlohmann::json::parse(body);
  CHECK(parsed["model"] == "gpt-4o");
  CHECK(parsed["messages"][0]["role"] == "user");
  CHECK(parsed["messages"][0]["content"] == "do the thing");

  CHECK(HttpChatProvider::extract_text(
            R"({"choices":[{"message":{"role":"assistant","content":"done"}}]})") == "done");
  CHECK_THROWS_AS(HttpChatProvider::extract_text(R"({"error":{"message":"nope"}})"),
                  ProviderError);
  CHECK_THROWS_AS(HttpChatProvider::extract_text("not json"), ProviderError);
  CHECK(default_key_env("openai") == "ARACNE_PROVIDER_OPENAI_KEY");
}

TEST_CASE("model id splitting") {
  auto [provider, model] = split_model_id("openai/o3-mini");
  CHECK(provider == "openai");
  CHECK(model == "o3-mini");
  auto [p2, m2] = split_model_id("bare");
  CHECK(p2 == "bare");
  CHECK(m2 == "bare");
}
