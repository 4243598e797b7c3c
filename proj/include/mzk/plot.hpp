#pragma once

#include <string>
#include <vector>

namespace mzk {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Self-contained SVG line plot. Throws DomainError for an empty table or a
/// series whose x and y lengths differ. Non-positive values are dropped on
/// logarithmic axes.
std::string emit_plot(const std::vector<Series>& table, const PlotSpec& spec);

/// Rate axis on [0, 1] with labelled reference ticks at 7/48, 1/3, 1/2, 5/7,
/// ~0.74 and 5/6 and a marker (id "fitted-rate") at rho.
std::string emit_rate_plot(double rho, const std::string& title = "blow-up rate");

/// Horizontal position used by emit_rate_plot for a rate value.
double rate_axis_position(double rate);

}  // namespace mzk
