#pragma once

#include <array>
#include <string>
#include <vector>

namespace pocs {

struct SvgSeries {
  std::string label;
  std::string color = "#b2182b";
  bool dashed = false;
  std::vector<std::array<double, 2>> points;  // (x, y) in data space
};

/// Renders a line chart as a standalone SVG document with fixed layout and
/// deterministic number formatting, so identical inputs give identical bytes.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<SvgSeries>& series);

}  // namespace pocs
