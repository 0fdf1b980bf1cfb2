#pragma once

#include <string>
#include <vector>

namespace pgpr::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool line = true;
  bool markers = true;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Standalone SVG document with axes, ticks, a legend and one polyline or
/// marker set per series. Non-finite points are skipped.
std::string render(const Chart& chart);

/// Heatmap of `values` (row-major, `rows` x `cols`, row 0 at the bottom) over
/// [x0, x1] x [y0, y1] with a linear grey-to-blue colour scale.
std::string heatmap(const std::string& title, const std::vector<double>& values, int rows, int cols, double x0,
                    double x1, double y0, double y1, const std::string& x_label, const std::string& y_label);

}  // namespace pgpr::svg
