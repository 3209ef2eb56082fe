#include "jcqrc/report.hpp"

#include "jcqrc/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace jcqrc {

std::string format_number(double value) {
  if (std::isnan(value)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_metrics_csv(const ExperimentResult& result, std::ostream& out) {
  out << "name,delay,train,test\n";
  for (const auto& m : result.metrics) {
    out << m.name << ',' << m.delay << ',' << (m.train ? format_number(*m.train) : "") << ','
        << (m.test ? format_number(*m.test) : "") << '\n';
  }
}

void write_predictions_csv(const PredictionTrace& trace, std::ostream& out) {
  out << "step,target,predicted\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i)
    out << trace.steps[i] << ',' << format_number(trace.target[i]) << ',' << format_number(trace.predicted[i]) << '\n';
}

void write_wigner_csv(const RealMatrix& w, const WignerGrid& grid, std::ostream& out) {
  out << "x,p,W\n";
  for (int i = 0; i < grid.resolution; ++i)
    for (int j = 0; j < grid.resolution; ++j)
      out << format_number(grid.x(i)) << ',' << format_number(grid.p(j)) << ',' << format_number(w(i, j)) << '\n';
}

void write_fading_csv(const FadingTrace& trace, std::ostream& out) {
  out << "step,distance,relative\n";
  const double first = trace.distance.empty() ? 0.0 : trace.distance.front();
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const double rel = first > 0.0 ? trace.distance[i] / first : std::nan("");
    out << trace.steps[i] << ',' << format_number(trace.distance[i]) << ',' << format_number(rel) << '\n';
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace jcqrc
