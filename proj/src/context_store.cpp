#include "aracne/context_store.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aracne/errors.hpp"

namespace aracne {

using nlohmann::json;

std::string serialize_plan(const AttackPlan& plan) {
  json steps = json::array();
  for (const auto& step : plan.steps) steps.push_back(step.description);
  json obj = {
      {"steps", std::move(steps)},
      {"goal_verification", plan.goal_verification},
      {"goal_reached", plan.goal_reached},
  };
  return obj.dump();
}

namespace {

std::string context_line(int iteration, const char* kind, const std::string& body) {
  json obj = {{"iteration", iteration}, {"kind", kind}, {"body", body}};
  return obj.dump() + "\n";
}

}  // namespace

ContextStore::ContextStore(Goal goal, std::filesystem::path backing_path, bool summarizer_enabled)
    : goal_(std::move(goal)),
      backing_path_(std::move(backing_path)),
      summarizer_enabled_(summarizer_enabled) {
  persist_full();
}

void ContextStore::append_record(const ContextRecord& record) {
  int expected = last_iteration_ + 1;
  if (record.iteration != expected) {
    throw ContractViolation("append_record: iteration " + std::to_string(record.iteration) +
                            " does not follow " + std::to_string(last_iteration_));
  }
  records_.push_back(record);
  last_iteration_ = record.iteration;
  persist_append(record);
}

void ContextStore::apply_summary(const std::string& summary, int cut) {
  if (!summarizer_enabled_) {
    throw ContractViolation("apply_summary called with summarizer disabled");
  }
  if (cut > last_iteration_) {
    throw ContractViolation("apply_summary: cut " + std::to_string(cut) + " beyond last iteration " +
                            std::to_string(last_iteration_));
  }
  summarized_prefix_ = summary;
  summary_cut_ = cut;
  std::vector<ContextRecord> kept;
  for (const auto& r : records_) {
    if (r.iteration > cut) kept.push_back(r);
  }
  records_ = std::move(kept);
  persist_full();
}

std::string ContextStore::render() const {
  std::vector<std::string> segments;
  segments.push_back("GOAL:\n" + goal_.render() + "\n");
  if (summarized_prefix_) {
    segments.push_back("SUMMARY:\n" + *summarized_prefix_ + "\n");
  }
  for (const auto& r : records_) {
    std::string block;
    if (r.previous_plan) block += "PLAN:\n" + serialize_plan(*r.previous_plan) + "\n";
    if (r.command) block += "COMMAND:\n" + *r.command + "\n";
    if (r.output) block += "OUTPUT:\n" + *r.output + "\n";
    segments.push_back(std::move(block));
  }
  std::string out;
  for (size_t i = 0; i < segments.size(); ++i) {
    if (i > 0) out += "\n";
    out += segments[i];
  }
  return out;
}

std::string ContextStore::record_lines(const ContextRecord& record) const {
  std::string lines;
  if (record.previous_plan) {
    lines += context_line(record.iteration, "plan", serialize_plan(*record.previous_plan));
  }
  if (record.command) lines += context_line(record.iteration, "command", *record.command);
  if (record.output) lines += context_line(record.iteration, "output", *record.output);
  return lines;
}

void ContextStore::persist_full() const {
  std::error_code ec;
  std::filesystem::create_directories(backing_path_.parent_path(), ec);
  std::ofstream out(backing_path_, std::ios::binary | std::ios::trunc);
  if (!out) throw PersistenceError("cannot open context file: " + backing_path_.string());
  out << context_line(0, "goal", goal_.render());
  if (summarized_prefix_) {
    out << context_line(summary_cut_, "summary", *summarized_prefix_);
  }
  for (const auto& r : records_) out << record_lines(r);
  out.flush();
  if (!out) throw PersistenceError("context write failed: " + backing_path_.string());
}

void ContextStore::persist_append(const ContextRecord& record) const {
  std::ofstream out(backing_path_, std::ios::binary | std::ios::app);
  if (!out) throw PersistenceError("cannot open context file: " + backing_path_.string());
  out << record_lines(record);
  out.flush();
  if (!out) throw PersistenceError("context write failed: " + backing_path_.string());
}

ContextStore ContextStore::load(const std::filesystem::path& backing_path) {
  std::ifstream in(backing_path, std::ios::binary);
  if (!in) throw PersistenceError("cannot open context file: " + backing_path.string());

  ContextStore store;
  store.backing_path_ = backing_path;

  std::map<int, ContextRecord> by_iteration;
  bool goal_seen = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw SchemaError("context file line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    if (!obj.contains("iteration") || !obj.contains("kind") || !obj.contains("body")) {
      throw SchemaError("context file line " + std::to_string(line_no) + ": missing field", line_no);
    }
    int iteration = obj["iteration"].get<int>();
    std::string kind = obj["kind"].get<std::string>();
    std::string body = obj["body"].get<std::string>();
    if (kind == "goal") {
      store.goal_ = Goal{body, std::nullopt, GoalOrigin::User};
      goal_seen = true;
    } else if (kind == "summary") {
      store.summarized_prefix_ = body;
      store.summary_cut_ = iteration;
      store.summarizer_enabled_ = true;
    } else if (kind == "plan") {
      // The stored body is the canonical serialize_plan output; a strict
      // parse here round-trips byte-identically through render().
      json plan_obj;
      try {
        plan_obj = json::parse(body);
      } catch (const json::exception& e) {
        throw SchemaError("context file line " + std::to_string(line_no) + ": bad plan body: " + e.what(),
                          line_no);
      }
      AttackPlan plan;
      plan.goal_verification = plan_obj.value("goal_verification", "");
      plan.goal_reached = plan_obj.value("goal_reached", false);
      int ordinal = 0;
      for (const auto& step : plan_obj.value("steps", json::array())) {
        plan.steps.push_back(PlanStep{ordinal++, step.get<std::string>()});
      }
      by_iteration[iteration].iteration = iteration;
      by_iteration[iteration].previous_plan = std::move(plan);
    } else if (kind == "command") {
      by_iteration[iteration].iteration = iteration;
      by_iteration[iteration].command = body;
    } else if (kind == "output") {
      by_iteration[iteration].iteration = iteration;
      by_iteration[iteration].output = body;
    } else {
      throw SchemaError("context file line " + std::to_string(line_no) + ": unknown kind '" + kind + "'",
                        line_no);
    }
  }
  if (!goal_seen) throw SchemaError("context file has no goal record");
  for (auto& [iteration, record] : by_iteration) {
    store.records_.push_back(std::move(record));
    store.last_iteration_ = iteration;
  }
  if (store.summary_cut_ > store.last_iteration_) store.last_iteration_ = store.summary_cut_;
  return store;
}

}  // namespace aracne
