#include <doctest.h>

#include <random>

#include "aracne/context_store.hpp"
#include "aracne/errors.hpp"
#include "aracne/planner.hpp"
#include "aracne/util.hpp"
#include "support.hpp"

using namespace aracne;

TEST_CASE("parse_plan maps the three fields") {
  auto plan = parse_plan(
      R"({"steps":["list users"],"goal_verification":"check file exists","goal_reached":false})");
  REQUIRE(plan.steps.size() == 1);
  CHECK(plan.steps[0].description == "list users");
  CHECK(plan.steps[0].ordinal == 0);
  CHECK(plan.goal_verification == "check file exists");
  CHECK_FALSE(plan.goal_reached);
}

TEST_CASE("fenced payload parses the same as unfenced") {
  std::string object =
      R"({"steps":["a","b"],"goal_verification":"v","goal_reached":false})";
  auto bare = parse_plan(object);
  auto fenced = parse_plan("Here is the plan:\n```json\n" + object + "\n```\nGood luck!");
  CHECK(bare == fenced);
}

TEST_CASE("terminal plan with empty steps is allowed") {
  auto plan = parse_plan(R"({"steps":[],"goal_verification":"v","goal_reached":true})");
  CHECK(plan.steps.empty());
  CHECK(plan.goal_reached);
}

TEST_CASE("empty steps while not reached is rejected") {
  try {
    parse_plan(R"({"steps":[],"goal_verification":"v","goal_reached":false})");
    FAIL("expected PlanParseError");
  } catch (const PlanParseError& e) {
    CHECK(e.kind() == PlanParseError::Kind::EmptyStepsWhileNotReached);
  }
}

TEST_CASE("missing fields and wrong types carry the field name") {
  try {
    parse_plan(R"({"goal_verification":"v","goal_reached":true})");
    FAIL("expected PlanParseError");
  } catch (const PlanParseError& e) {
    CHECK(e.kind() == PlanParseError::Kind::MissingField);
    CHECK(e.field() == "steps");
  }
  try {
    parse_plan(R"({"steps":"not a list","goal_verification":"v","goal_reached":true})");
    FAIL("expected PlanParseError");
  } catch (const PlanParseError& e) {
    CHECK(e.kind() == PlanParseError::Kind::WrongType);
    CHECK(e.field() == "steps");
  }
  try {
    parse_plan(R"({"steps":[],"goal_verification":"v","goal_reached":"yes"})");
    FAIL("expected PlanParseError");
  } catch (const PlanParseError& e) {
    CHECK(e.kind() == PlanParseError::Kind::WrongType);
    CHECK(e.field() == "goal_reached");
  }
}

TEST_CASE("no object found") {
  CHECK_THROWS_AS(parse_plan("I will now describe my plan in plain words."), PlanParseError);
  try {
    parse_plan("nothing here");
    FAIL("expected PlanParseError");
  } catch (const PlanParseError& e) {
    CHECK(e.kind() == PlanParseError::Kind::NoObjectFound);
  }
}

TEST_CASE("braces inside strings do not break extraction") {
  auto plan = parse_plan(
      R"(Sure. {"steps":["echo '{'"],"goal_verification":"grep '}' file","goal_reached":false})");
  CHECK(plan.steps[0].description == "echo '{'");
  CHECK(plan.goal_verification == "grep '}' file");
}

TEST_CASE("unknown fields are ignored") {
  auto plan = parse_plan(
      R"({"steps":["a"],"goal_verification":"v","goal_reached":false,"confidence":0.9})");
  CHECK(plan.steps.size() == 1);
}

TEST_CASE("plan() validates scripted output and keeps verification verbatim") {
  testsupport::ScriptedGateway scripted;
  // Matches the verification style a planner model produces for a backdoor
  // persistence goal.
  std::string verification =
      "Verify that /usr/local/bin/.backdoor.sh exists and is executable, and check that "
      "/etc/rc.local runs it.";
  scripted.provider->push_for_model(
      "planner", testsupport::plan_json({"install the backdoor"}, verification, false));
  AgentConfig config = testsupport::test_config();
  auto accepted = plan(Goal{"persist"}, "GOAL:\npersist\n", scripted.gateway, config);
  CHECK(accepted.goal_verification == verification);
}

TEST_CASE("plan() re-prompts once on a malformed response") {
  testsupport::ScriptedGateway scripted;
  scripted.provider->push_for_model("planner", "no json at all");
  scripted.provider->push_for_model("planner",
                                    testsupport::plan_json({"try again"}, "v", false));
  AgentConfig config = testsupport::test_config();
  auto accepted = plan(Goal{"g"}, "ctx", scripted.gateway, config);
  CHECK(accepted.steps.size() == 1);
  auto prompts = scripted.provider->prompts_for_model("planner");
  REQUIRE(prompts.size() == 2);
  CHECK(prompts[1].find("could not be used") != std::string::npos);

  SUBCASE("second failure propagates") {
    testsupport::ScriptedGateway failing;
    failing.provider->push_for_model("planner", "garbage");
    failing.provider->push_for_model("planner", "more garbage");
    CHECK_THROWS_AS(plan(Goal{"g"}, "ctx", failing.gateway, config), PlanParseError);
  }
}

namespace {

AttackPlan random_plan(std::mt19937& rng) {
  std::uniform_int_distribution<int> step_count(0, 6);
  std::uniform_int_distribution<int> char_count(1, 40);
  std::uniform_int_distribution<int> char_pick(0, 94);
  auto random_text = [&] {
    int length = char_count(rng);
    std::string text;
    for (int i = 0; i < length; ++i) {
      text.push_back(static_cast<char>(' ' + char_pick(rng)));
    }
    if (util::trim(text).empty()) text = "x" + text;
    return text;
  };
  AttackPlan plan;
  int steps = step_count(rng);
  for (int i = 0; i < steps; ++i) plan.steps.push_back(PlanStep{i, random_text()});
  plan.goal_verification = random_text();
  plan.goal_reached = steps == 0 ? true : (rng() % 2 == 0);
  return plan;
}

}  // namespace

TEST_CASE("serialize -> parse_plan round-trips random valid plans") {
  std::mt19937 rng(20250810);
  for (int i = 0; i < 300; ++i) {
    AttackPlan original = random_plan(rng);
    AttackPlan reparsed = parse_plan(serialize_plan(original));
    CHECK(reparsed == original);
  }
}
