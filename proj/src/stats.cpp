#include "aracne/bench/stats.hpp"

#include <cmath>

#include "aracne/errors.hpp"
#include "aracne/util.hpp"

namespace aracne::bench {

ActionStats action_stats(const std::vector<double>& values) {
  if (values.empty()) throw ContractViolation("action_stats: empty selection");
  ActionStats stats;
  stats.n = static_cast<int>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / static_cast<double>(stats.n);
  if (stats.n > 1) {
    double squares = 0.0;
    for (double v : values) squares += (v - stats.mean) * (v - stats.mean);
    stats.sample_std = std::sqrt(squares / static_cast<double>(stats.n - 1));
  }
  return stats;
}

std::vector<double> select_actions(const ResultTable& table, StatsFilter filter) {
  std::vector<double> values;
  for (const auto& row : table.rows) {
    if (row.status != LevelStatus::Done || !row.actions) continue;
    if (filter == StatsFilter::Wins && row.winner != Winner::Agent) continue;
    if (filter == StatsFilter::Losses && row.winner != Winner::Target) continue;
    values.push_back(static_cast<double>(*row.actions));
  }
  return values;
}

ActionStats action_stats(const ResultTable& table, StatsFilter filter) {
  return action_stats(select_actions(table, filter));
}

double success_rate(const ResultTable& table) {
  if (table.rows.empty()) throw ContractViolation("success_rate: empty table");
  int wins = 0;
  for (const auto& row : table.rows) {
    if (row.winner == Winner::Agent) ++wins;
  }
  return 100.0 * static_cast<double>(wins) / static_cast<double>(table.rows.size());
}

std::string format_stats(const ActionStats& stats) {
  return util::format_double(stats.mean, 2) + " ± " + util::format_double(stats.sample_std, 2);
}

}  // namespace aracne::bench
