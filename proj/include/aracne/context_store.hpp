#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aracne/domain.hpp"

namespace aracne {

// Canonical JSON serialization of an AttackPlan: compact, keys sorted.
// parse_plan (planner module) is its inverse on valid plans.
std::string serialize_plan(const AttackPlan& plan);

// The planner's working memory, persisted as newline-delimited JSON records
// {body, iteration, kind} at backing_path. The goal is written on creation;
// every append is flushed before returning. Summarization rewrites the file,
// dropping the summarized records (the attack log keeps the full history).
class ContextStore {
 public:
  ContextStore(Goal goal, std::filesystem::path backing_path, bool summarizer_enabled);

  static ContextStore load(const std::filesystem::path& backing_path);

  void append_record(const ContextRecord& record);
  void apply_summary(const std::string& summary, int cut);

  // Deterministic text: goal block, then the summary prefix if any, then
  // PLAN / COMMAND / OUTPUT blocks per remaining record in iteration order.
  std::string render() const;

  const Goal& goal() const { return goal_; }
  const std::vector<ContextRecord>& records() const { return records_; }
  const std::optional<std::string>& summarized_prefix() const { return summarized_prefix_; }
  int last_iteration() const { return last_iteration_; }
  const std::filesystem::path& backing_path() const { return backing_path_; }
  bool summarizer_enabled() const { return summarizer_enabled_; }

 private:
  ContextStore() = default;

  void persist_full() const;
  void persist_append(const ContextRecord& record) const;
  std::string record_lines(const ContextRecord& record) const;

  Goal goal_;
  std::filesystem::path backing_path_;
  bool summarizer_enabled_ = false;
  std::vector<ContextRecord> records_;
  std::optional<std::string> summarized_prefix_;
  int summary_cut_ = 0;
  int last_iteration_ = 0;
};

}  // namespace aracne
