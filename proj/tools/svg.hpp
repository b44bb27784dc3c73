#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cli {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

/// Line chart with axes, ticks and a legend. Points outside [y_lo, y_hi]
/// are clipped to the frame.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series, double x_lo,
                       double x_hi, double y_lo, double y_hi);

}  // namespace cli
