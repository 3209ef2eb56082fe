// sweep.hpp: Cartesian parameter grids over experiments, evaluated in parallel.
#pragma once

#include "jcqrc/pipeline.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace jcqrc {

// Sweepable parameters: delta_b, delta, chi, alpha, kappa, dt, V, n_levels,
// tau, k, ridge_lambda, seed, segment.
void apply_parameter(ExperimentSpec& spec, std::string_view name, double value);
const std::vector<std::string>& sweep_parameters();

struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
};

enum class Aggregation {
  PerPoint,        // one experiment per grid point
  SegmentAverage,  // mean and population std over Mackey-Glass segments 0..segments-1
};

std::string_view to_string(Aggregation aggregation);
Aggregation parse_aggregation(std::string_view name);

struct SweepSpec {
  ExperimentSpec base;
  std::vector<SweepAxis> axes;
  Aggregation aggregation = Aggregation::PerPoint;
  int segments = 10;

  void validate() const;
  std::size_t point_count() const;
  // Axis values of grid point `index`; the last axis varies fastest.
  std::vector<double> point(std::size_t index) const;
  ExperimentSpec point_spec(std::size_t index) const;
};

struct SweepRow {
  std::size_t index = 0;
  std::vector<double> values;  // one per axis
  bool ok = true;
  std::string error;
  // Column name -> value, in the order of SweepTable::columns. Missing values are NaN.
  std::vector<double> cells;
  Warnings warnings;
};

struct SweepTable {
  std::vector<std::string> axes;
  std::vector<std::string> columns;
  std::vector<SweepRow> rows;

  // Throws std::out_of_range for an unknown column.
  double cell(std::size_t row, std::string_view column) const;
};

// workers <= 0 uses std::thread::hardware_concurrency(). The table is identical for any worker count.
SweepTable run_sweep(const SweepSpec& sweep, int workers = 1);

// STM capacity per (n_levels, kappa) with the maximum top-two-level population of each run.
SweepTable convergence_study(const ExperimentSpec& base, const std::vector<int>& levels,
                             const std::vector<double>& kappas, int workers = 1);

void write_sweep_csv(const SweepTable& table, std::ostream& out);

}  // namespace jcqrc
