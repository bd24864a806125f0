#ifndef AEBSIM_SVG_PLOT_HPP
#define AEBSIM_SVG_PLOT_HPP

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace aebsim::svg {

/// One plotted series. Non-finite y values split the polyline.
struct Series {
  std::string label;
  std::string color = "#1f77b4";
  bool step = false;  // staircase interpolation (state plots)
  std::vector<double> x;
  std::vector<double> y;
};

struct AxisTick {
  double value = 0.0;
  std::string label;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 860;
  int height = 420;
  /// Fixed y range; auto-scaled from the data when absent.
  std::optional<std::pair<double, double>> y_range;
  /// Explicit y ticks (category axes); auto 1-2-5 ticks when empty.
  std::vector<AxisTick> y_ticks;
};

/// Emit a standalone SVG line chart.
void write_line_chart(std::ostream& out, const ChartSpec& spec, std::span<const Series> series);

}  // namespace aebsim::svg

#endif  // AEBSIM_SVG_PLOT_HPP
