#pragma once

#include <string>
#include <utility>
#include <vector>

#include "report.hpp"

namespace biortho::cli {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Static line chart; points are drawn in the given order, non-finite ones skipped.
std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series);

// ln norms and bounds against 1/T, one group of curves per (n_star, m).
std::string verify_plot(const BoundReport& report);
// The same quantities against the swept value (1/T for a T sweep).
std::string sweep_plot(SweepAxis axis, const std::vector<SweepPoint>& points);

}  // namespace biortho::cli
