#include "jcqrc/sweep.hpp"

#include "jcqrc/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace jcqrc {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

int as_count(std::string_view name, double value, int min_value) {
  if (!std::isfinite(value) || value != std::round(value) || value < min_value)
    throw ConfigError("sweep parameter " + std::string(name) + " needs integers >= " + std::to_string(min_value));
  return static_cast<int>(value);
}

std::string metric_column(const TaskMetric& m, std::string_view part) {
  return m.name + "_" + std::to_string(m.delay) + "_" + std::string(part);
}

struct JobOutcome {
  bool ok = false;
  std::string error;
  ExperimentResult result;
};

// Named values of one experiment in a stable order.
std::vector<std::pair<std::string, double>> flatten(const ExperimentResult& r) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& m : r.metrics) {
    out.emplace_back(metric_column(m, "test"), m.test.value_or(kMissing));
    out.emplace_back(metric_column(m, "train"), m.train.value_or(kMissing));
  }
  out.emplace_back("max_top_population", r.diagnostics.max_top_population);
  out.emplace_back("min_eigenvalue", r.diagnostics.min_eigenvalue);
  out.emplace_back("max_trace_defect", r.diagnostics.max_trace_defect);
  return out;
}

void format_cell(std::ostream& out, double v) {
  if (std::isnan(v)) return;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out << buf;
}

}  // namespace

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names = {"delta_b", "delta", "chi", "alpha", "kappa", "dt", "V",
                                                 "n_levels", "tau", "k", "ridge_lambda", "seed", "segment"};
  return names;
}

void apply_parameter(ExperimentSpec& spec, std::string_view name, double value) {
  auto& c = spec.config;
  if (name == "delta_b") c.delta_b = value;
  else if (name == "delta") c.delta = value;
  else if (name == "chi") c.chi = value;
  else if (name == "alpha") c.alpha = value;
  else if (name == "kappa") c.kappa = value;
  else if (name == "dt") c.dt = value;
  else if (name == "V" || name == "virtual_nodes") c.virtual_nodes = as_count(name, value, 1);
  else if (name == "n_levels") c.n_levels = as_count(name, value, 2);
  else if (name == "tau" || name == "k") spec.task.delays = {as_count(name, value, 0)};
  else if (name == "ridge_lambda") c.ridge_lambda = value;
  else if (name == "seed") c.seed = static_cast<std::uint64_t>(as_count(name, value, 0));
  else if (name == "segment") spec.task.segment = as_count(name, value, 0);
  else throw ConfigError("unknown sweep parameter '" + std::string(name) + "'");
}

std::string_view to_string(Aggregation aggregation) {
  return aggregation == Aggregation::PerPoint ? "per_point" : "segment_average";
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "per_point") return Aggregation::PerPoint;
  if (name == "segment_average") return Aggregation::SegmentAverage;
  throw ConfigError("unknown aggregation '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  for (const auto& axis : axes) {
    if (axis.values.empty()) throw ConfigError("sweep axis " + axis.parameter + " has no values");
    ExperimentSpec probe = base;
    for (double v : axis.values) apply_parameter(probe, axis.parameter, v);
  }
  if (aggregation == Aggregation::SegmentAverage) {
    if (base.task.kind != TaskKind::MackeyGlass) throw ConfigError("segment averaging needs the mackey_glass task");
    if (segments < 1) throw ConfigError("segment averaging needs at least one segment");
  }
  for (std::size_t i = 0; i < point_count(); ++i) point_spec(i).validate();
}

std::size_t SweepSpec::point_count() const {
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.values.size();
  return n;
}

std::vector<double> SweepSpec::point(std::size_t index) const {
  std::vector<double> out(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    const std::size_t size = axes[a].values.size();
    out[a] = axes[a].values[index % size];
    index /= size;
  }
  return out;
}

ExperimentSpec SweepSpec::point_spec(std::size_t index) const {
  ExperimentSpec spec = base;
  const std::vector<double> values = point(index);
  for (std::size_t a = 0; a < axes.size(); ++a) apply_parameter(spec, axes[a].parameter, values[a]);
  return spec;
}

double SweepTable::cell(std::size_t row, std::string_view column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) throw std::out_of_range("no column " + std::string(column));
  return rows.at(row).cells.at(static_cast<std::size_t>(it - columns.begin()));
}

SweepTable run_sweep(const SweepSpec& sweep, int workers) {
  sweep.validate();
  const std::size_t points = sweep.point_count();
  const std::size_t per_point = sweep.aggregation == Aggregation::SegmentAverage
                                    ? static_cast<std::size_t>(sweep.segments)
                                    : 1;
  const std::size_t jobs = points * per_point;
  std::vector<JobOutcome> outcomes(jobs);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      ExperimentSpec spec = sweep.point_spec(j / per_point);
      if (per_point > 1) spec.task.segment = static_cast<int>(j % per_point);
      JobOutcome& out = outcomes[j];
      try {
        out.result = run_experiment(spec);
        out.ok = true;
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), jobs));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SweepTable table;
  for (const auto& axis : sweep.axes) table.axes.push_back(axis.parameter);

  // Column set: union over successful jobs, first-seen order by job index.
  std::vector<std::string> base_columns;
  for (const auto& o : outcomes) {
    if (!o.ok) continue;
    for (const auto& [name, value] : flatten(o.result))
      if (std::find(base_columns.begin(), base_columns.end(), name) == base_columns.end())
        base_columns.push_back(name);
  }
  if (per_point == 1) {
    table.columns = base_columns;
  } else {
    for (const auto& name : base_columns) {
      table.columns.push_back(name + "_mean");
      table.columns.push_back(name + "_std");
    }
    table.columns.push_back("segments_ok");
  }

  for (std::size_t p = 0; p < points; ++p) {
    SweepRow row;
    row.index = p;
    row.values = sweep.point(p);
    std::map<std::string, std::vector<double>> samples;
    std::size_t ok_count = 0;
    for (std::size_t s = 0; s < per_point; ++s) {
      const JobOutcome& o = outcomes[p * per_point + s];
      if (!o.ok) {
        row.ok = false;
        if (!row.error.empty()) row.error += "; ";
        row.error += (per_point > 1 ? "segment " + std::to_string(s) + ": " : std::string()) + o.error;
        continue;
      }
      ++ok_count;
      for (const auto& w : o.result.warnings)
        row.warnings.push_back(per_point > 1 ? "segment " + std::to_string(s) + ": " + w : w);
      for (const auto& [name, value] : flatten(o.result)) samples[name].push_back(value);
    }
    if (per_point == 1) {
      for (const auto& name : base_columns) {
        const auto it = samples.find(name);
        row.cells.push_back(it == samples.end() ? kMissing : it->second.front());
      }
    } else {
      for (const auto& name : base_columns) {
        const auto it = samples.find(name);
        if (it == samples.end() || it->second.empty()) {
          row.cells.push_back(kMissing);
          row.cells.push_back(kMissing);
          continue;
        }
        const auto& v = it->second;
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        row.cells.push_back(mean);
        row.cells.push_back(std::sqrt(var / static_cast<double>(v.size())));
      }
      row.cells.push_back(static_cast<double>(ok_count));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

SweepTable convergence_study(const ExperimentSpec& base, const std::vector<int>& levels,
                             const std::vector<double>& kappas, int workers) {
  if (levels.empty() || kappas.empty()) throw ConfigError("convergence study needs levels and kappas");
  for (int l : levels)
    if (l < 2) throw ConfigError("convergence study: levels must be >= 2");
  SweepSpec sweep;
  sweep.base = base;
  sweep.base.task.kind = TaskKind::STM;
  sweep.axes.push_back({"n_levels", std::vector<double>(levels.begin(), levels.end())});
  sweep.axes.push_back({"kappa", kappas});
  return run_sweep(sweep, workers);
}

void write_sweep_csv(const SweepTable& table, std::ostream& out) {
  out << "index";
  for (const auto& a : table.axes) out << ',' << a;
  for (const auto& c : table.columns) out << ',' << c;
  out << ",ok,warnings,error\n";
  for (const auto& row : table.rows) {
    out << row.index;
    for (double v : row.values) {
      out << ',';
      format_cell(out, v);
    }
    for (double v : row.cells) {
      out << ',';
      format_cell(out, v);
    }
    out << ',' << (row.ok ? 1 : 0) << ',' << row.warnings.size() << ',';
    std::string err = row.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << err << '\n';
  }
}

}  // namespace jcqrc
