#pragma once

#include <optional>
#include <string>

#include "aracne/bench/level.hpp"

namespace aracne::bench {

struct ReportOptions {
  const ResultTable* baseline = nullptr;       // same level ids; adds (+n)/(-n)/(=) deltas
  std::optional<double> reference_rate;        // prior-art success rate for the footer
};

// Column-aligned table (Challenge / Status / Winner / Actions / Attempts)
// plus a footer with the success rate and action statistics.
std::string render_report(const ResultTable& table, const ReportOptions& options = {});

}  // namespace aracne::bench
