#include "jcqrc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace jcqrc::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

void header(std::ostringstream& o, const Labels& labels) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(labels.title)
    << "</text>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">" << escape(labels.x)
    << "</text>\n"
    << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << kHeight / 2 << ")\">" << escape(labels.y) << "</text>\n";
}

void axes(std::ostringstream& o, double x0, double x1, double y0, double y1, bool log_y) {
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = t / 4.0;
    const double px = kLeft + fx * pw;
    const double py = kTop + ph - fx * ph;
    const double yv = y0 + fx * (y1 - y0);
    o << "<text x=\"" << num(px) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
      << num(x0 + fx * (x1 - x0)) << "</text>\n";
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\">"
      << num(log_y ? std::pow(10.0, yv) : yv) << "</text>\n";
  }
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, const Labels& labels) {
  auto ty = [&](double y) { return labels.log_y ? std::log10(std::max(y, 1e-300)) : y; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x0 < x1)) { x0 = std::isfinite(x0) ? x0 - 1 : 0; x1 = x0 + 2; }
  if (!(y0 < y1)) { y0 = std::isfinite(y0) ? y0 - 1 : 0; y1 = y0 + 2; }

  std::ostringstream o;
  header(o, labels);
  axes(o, x0, x1, y0, y1, labels.log_y);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kColours[k % std::size(kColours)];
    o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      o << num(kLeft + (s.x[i] - x0) / (x1 - x0) * pw) << ',' << num(kTop + ph - (ty(s.y[i]) - y0) / (y1 - y0) * ph)
        << ' ';
    }
    o << "\"/>\n";
    o << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 16 + 14 * k << "\" fill=\"" << colour << "\">"
      << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string heatmap(const RealMatrix& values, double x_min, double x_max, double y_min, double y_max,
                    const Labels& labels) {
  std::ostringstream o;
  header(o, labels);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const double scale = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  const double cw = pw / values.rows();
  const double ch = ph / values.cols();
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      const double v = std::clamp(values(i, j) / scale, -1.0, 1.0);
      // White at zero, blue for positive, magenta for negative values.
      const int r = v >= 0 ? static_cast<int>(255 * (1 - v)) : 255;
      const int g = static_cast<int>(255 * (1 - std::abs(v)));
      const int b = 255;
      char colour[8];
      std::snprintf(colour, sizeof colour, "#%02x%02x%02x", r, g, b);
      o << "<rect x=\"" << num(kLeft + i * cw) << "\" y=\"" << num(kTop + ph - (j + 1) * ch) << "\" width=\""
        << num(cw + 0.3) << "\" height=\"" << num(ch + 0.3) << "\" fill=\"" << colour << "\"/>\n";
    }
  }
  axes(o, x_min, x_max, y_min, y_max, false);
  o << "</svg>\n";
  return o.str();
}

}  // namespace jcqrc::svg
