#include "aracne/bench/report.hpp"

#include <algorithm>
#include <map>

#include "aracne/bench/stats.hpp"
#include "aracne/errors.hpp"
#include "aracne/util.hpp"

namespace aracne::bench {

namespace {

std::string winner_cell(const ResultTable& table, const LevelResult& row) {
  if (row.status == LevelStatus::Unsuitable) return "--";
  switch (row.winner) {
    case Winner::Agent: return table.agent_name;
    case Winner::Target: return table.target_name;
    case Winner::None: return "--";
  }
  return "--";
}

std::string delta_annotation(int actions, int baseline_actions) {
  int delta = actions - baseline_actions;
  if (delta == 0) return "(=)";
  if (delta > 0) return "(+" + std::to_string(delta) + ")";
  return "(-" + std::to_string(-delta) + ")";
}

}  // namespace

std::string render_report(const ResultTable& table, const ReportOptions& options) {
  std::map<std::string, const LevelResult*> baseline_rows;
  if (options.baseline != nullptr) {
    if (options.baseline->rows.size() != table.rows.size()) {
      throw ContractViolation("baseline does not cover the same levels");
    }
    for (const auto& row : options.baseline->rows) baseline_rows[row.id] = &row;
    for (const auto& row : table.rows) {
      if (baseline_rows.find(row.id) == baseline_rows.end()) {
        throw ContractViolation("baseline is missing level id '" + row.id + "'");
      }
    }
  }

  const std::vector<std::string> headers = {"Challenge", "Status", "Winner", "Actions", "Attempts"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : table.rows) {
    std::string actions = "--";
    std::string attempts = "--";
    if (row.status == LevelStatus::Done) {
      if (row.actions) {
        actions = std::to_string(*row.actions);
        if (options.baseline != nullptr) {
          const LevelResult* base = baseline_rows[row.id];
          if (base->actions) actions += " " + delta_annotation(*row.actions, *base->actions);
        }
      }
      if (row.attempts) attempts = std::to_string(*row.attempts);
    }
    cells.push_back({row.id, to_string(row.status), winner_cell(table, row), actions, attempts});
  }

  std::vector<size_t> widths;
  for (size_t c = 0; c < headers.size(); ++c) {
    size_t width = headers[c].size();
    for (const auto& row : cells) width = std::max(width, row[c].size());
    widths.push_back(width);
  }

  auto render_row = [&widths](const std::vector<std::string>& row) {
    std::string line = "|";
    for (size_t c = 0; c < row.size(); ++c) {
      line += " " + row[c] + std::string(widths[c] - row[c].size(), ' ') + " |";
    }
    return line + "\n";
  };

  std::string out = render_row(headers);
  std::string rule = "|";
  for (size_t width : widths) rule += std::string(width + 2, '-') + "|";
  out += rule + "\n";
  for (const auto& row : cells) out += render_row(row);

  out += "\n";
  int wins = 0;
  for (const auto& row : table.rows) {
    if (row.winner == Winner::Agent) ++wins;
  }
  double rate = success_rate(table);
  out += "Success rate: " + util::format_double(rate, 2) + "% (" + std::to_string(wins) + "/" +
         std::to_string(table.rows.size()) + ")\n";

  auto all = select_actions(table, StatsFilter::All);
  auto win_values = select_actions(table, StatsFilter::Wins);
  auto loss_values = select_actions(table, StatsFilter::Losses);
  if (!all.empty()) out += "Actions (all): " + format_stats(action_stats(all)) + "\n";
  if (!win_values.empty()) out += "Actions (wins): " + format_stats(action_stats(win_values)) + "\n";
  if (!loss_values.empty()) {
    out += "Actions (losses): " + format_stats(action_stats(loss_values)) + "\n";
  }

  if (options.reference_rate) {
    double rounded = std::stod(util::format_double(rate, 2));
    double improvement = rounded - *options.reference_rate;
    std::string sign = improvement >= 0 ? "+" : "";
    out += "Improvement over reference " + util::format_double(*options.reference_rate, 2) + "%: " +
           sign + util::format_double(improvement, 2) + "\n";
  }
  return out;
}

}  // namespace aracne::bench
