// svg.hpp: small dependency-free SVG plots (lines, heatmaps).
#pragma once

#include "jcqrc/hilbert.hpp"

#include <string>
#include <vector>

namespace jcqrc::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Labels {
  std::string title;
  std::string x;
  std::string y;
  bool log_y = false;
};

std::string line_plot(const std::vector<Series>& series, const Labels& labels);

// values(i, j) is drawn at column i (x axis) and row j (y axis, increasing upwards).
// Diverging palette centred on zero: blue positive, magenta negative.
std::string heatmap(const RealMatrix& values, double x_min, double x_max, double y_min, double y_max,
                    const Labels& labels);

}  // namespace jcqrc::svg
