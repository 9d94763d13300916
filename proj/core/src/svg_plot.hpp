#pragma once

#include <string>
#include <utility>
#include <vector>

namespace gridplan::bench {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;  // (x, y), x > 0
};

/// Minimal standalone SVG line chart. The x axis is log2-scaled, matching
/// the doubling source/target counts of the benchmark grid.
std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<PlotSeries>& series);

}  // namespace gridplan::bench
