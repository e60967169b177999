#pragma once

#include <vector>

#include "aracne/bench/level.hpp"

namespace aracne::bench {

struct ActionStats {
  double mean = 0.0;
  double sample_std = 0.0;  // Bessel-corrected (n-1); 0 when n == 1
  int n = 0;
};

enum class StatsFilter { All, Wins, Losses };

// Pure functions; empty selections are contract violations.
ActionStats action_stats(const std::vector<double>& values);
ActionStats action_stats(const ResultTable& table, StatsFilter filter);
std::vector<double> select_actions(const ResultTable& table, StatsFilter filter);

// 100 * agent wins / total rows (unsuitable rows count in the denominator).
double success_rate(const ResultTable& table);

// "8.30 ± 11.27"
std::string format_stats(const ActionStats& stats);

}  // namespace aracne::bench
