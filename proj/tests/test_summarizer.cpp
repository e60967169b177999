#include <doctest.h>

#include "aracne/errors.hpp"
#include "aracne/summarizer.hpp"
#include "support.hpp"

using namespace aracne;

TEST_CASE("summarize requires the summarizer to be enabled") {
  testsupport::ScriptedGateway scripted;
  AgentConfig config = testsupport::test_config();
  config.summarizer_enabled = false;
  CHECK_THROWS_AS(summarize(Goal{"g"}, "ctx", scripted.gateway, config), ContractViolation);
}

TEST_CASE("scripted summary passes through") {
  testsupport::ScriptedGateway scripted;
  scripted.provider->push_for_model("summarizer", "S");
  AgentConfig config = testsupport::test_config();
  config.summarizer_enabled = true;
  CHECK(summarize(Goal{"g"}, "ctx", scripted.gateway, config) == "S");
}

TEST_CASE("overlong summary triggers exactly one length re-prompt") {
  testsupport::ScriptedGateway scripted;
  AgentConfig config = testsupport::test_config();
  config.summarizer_enabled = true;
  config.summary_cap = 20;
  scripted.provider->push_for_model("summarizer", std::string(50, 'x'));
  scripted.provider->push_for_model("summarizer", "short enough");
  std::string summary = summarize(Goal{"g"}, "ctx", scripted.gateway, config);
  CHECK(summary == "short enough");
  CHECK(scripted.provider->call_count() == 2);

  auto prompts = scripted.provider->prompts_for_model("summarizer");
  CHECK(prompts[1].find("at most 20 characters") != std::string::npos);
}

TEST_CASE("still overlong after the re-prompt hard-truncates") {
  testsupport::ScriptedGateway scripted;
  AgentConfig config = testsupport::test_config();
  config.summarizer_enabled = true;
  config.summary_cap = 10;
  scripted.provider->push_for_model("summarizer", std::string(30, 'a'));
  scripted.provider->push_for_model("summarizer", std::string(25, 'b'));
  std::string summary = summarize(Goal{"g"}, "ctx", scripted.gateway, config);
  CHECK(summary == std::string(10, 'b'));
}

TEST_CASE("a summary that drops the goal is flagged, not rejected") {
  testsupport::ScriptedGateway scripted;
  AgentConfig config = testsupport::test_config();
  config.summarizer_enabled = true;
  scripted.provider->push_for_model("summarizer", "something unrelated");
  std::vector<std::string> warnings;
  std::string summary = summarize(Goal{"copy the cryptowallet"}, "ctx", scripted.gateway, config,
                                  [&](const std::string& w) { warnings.push_back(w); });
  CHECK(summary == "something unrelated");
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("goal") != std::string::npos);

  SUBCASE("mentioning the goal raises no warning") {
    testsupport::ScriptedGateway quiet;
    quiet.provider->push_for_model("summarizer", "progress on: copy the cryptowallet");
    std::vector<std::string> none;
    summarize(Goal{"copy the cryptowallet"}, "ctx", quiet.gateway, config,
              [&](const std::string& w) { none.push_back(w); });
    CHECK(none.empty());
  }
}
