// pipeline.hpp: drive the reservoir through washout/train/test and score readouts.
#pragma once

#include "jcqrc/dynamics.hpp"
#include "jcqrc/learning.hpp"
#include "jcqrc/models.hpp"
#include "jcqrc/readout.hpp"
#include "jcqrc/tasks.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jcqrc {

struct TaskSpec {
  TaskKind kind = TaskKind::STM;
  // tau values for STM/PC, forecast horizons k for Mackey-Glass.
  std::vector<int> delays{0};
  // Mackey-Glass only.
  bool autonomous = false;   // also run closed-loop generation after training
  int horizon = 150;         // closed-loop steps
  int early_window = 80;     // extra RMSE over the first steps of the loop
  int segment = 0;           // window index; offset = segment * segment_stride
  int segment_stride = 400;  // samples between consecutive windows
  MgOptions mg;
  double input_scale = 1.0;  // beta = input_scale * s + input_offset
  double input_offset = 0.0;
  double clip_min = 0.0;     // closed-loop predictions are clipped before re-injection
  double clip_max = 2.0;
};

struct Monitoring {
  double positivity_tolerance = 1e-6;  // warn when min eigenvalue < -tolerance
  double population_threshold = 1e-4;  // warn when the top two levels hold more
};

struct ExperimentSpec {
  ReservoirConfig config;
  ObservableSet observables;
  TaskSpec task;
  std::optional<Split> split;  // defaults: 1000/1500/1000 (STM, PC), 1000/1000/150 (Mackey-Glass)
  PropagationOptions propagation;
  RidgeOptions ridge;
  Monitoring monitoring;

  Split resolved_split() const;
  void validate() const;
};

struct RunDiagnostics {
  long steps = 0;
  double max_trace_defect = 0.0;
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = 1.0;
  double max_top_population = 0.0;
  long positivity_violations = 0;
  long population_violations = 0;
  long first_positivity_violation = -1;
  long first_population_violation = -1;

  void merge(const RunDiagnostics& other);
};

// One reservoir trajectory. Copying a Reservoir branches the trajectory.
class Reservoir {
 public:
  explicit Reservoir(const ExperimentSpec& spec);

  std::size_t feature_width() const { return extractor_.size() * nodes_count(); }
  std::size_t nodes_count() const { return static_cast<std::size_t>(config_.virtual_nodes); }
  // "k<node>:<feature>" in column order.
  std::vector<std::string> feature_names() const;

  // Injects beta for one interval and writes the V feature blocks into `row`.
  // Propagation failures are rethrown with the step index.
  void step(double beta, std::span<double> row);

  const ComplexMatrix& state() const { return rho_; }
  void set_state(const ComplexMatrix& rho);
  long steps_taken() const { return diagnostics_.steps; }
  const RunDiagnostics& diagnostics() const { return diagnostics_; }
  Warnings warnings() const;

 private:
  void monitor(const ComplexMatrix& rho, bool end_of_interval);

  ReservoirConfig config_;
  Monitoring monitoring_;
  Propagator propagator_;
  FeatureExtractor extractor_;
  ComplexMatrix rho_;
  std::vector<ComplexMatrix> nodes_;
  RunDiagnostics diagnostics_;
};

struct ReservoirRun {
  FeatureMatrix features;
  RunDiagnostics diagnostics;
  Warnings warnings;
};

// Input sequence (beta values) of the spec's task, split.total() long.
std::vector<double> make_inputs(const ExperimentSpec& spec);
// Mackey-Glass window for the spec (split.total() + max k samples).
MgSeries make_mg_window(const ExperimentSpec& spec);

ReservoirRun run_reservoir(const ExperimentSpec& spec, std::span<const double> inputs);
FeatureMatrix run_reservoir(const ExperimentSpec& spec);

struct TaskMetric {
  std::string name;  // capacity, rmse_forecast, rmse_autonomous, rmse_autonomous_early
  int delay = 0;     // tau, k, or the number of closed-loop steps scored
  std::optional<double> train;
  std::optional<double> test;
  std::string note;
};

struct PredictionTrace {
  std::string name;
  int delay = 0;
  std::vector<long> steps;
  std::vector<double> target;
  std::vector<double> predicted;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<TaskMetric> metrics;
  std::vector<RidgeModel> models;  // one per delay, same order as spec.task.delays
  std::vector<PredictionTrace> traces;
  RunDiagnostics diagnostics;
  Warnings warnings;
  double seconds = 0.0;
  std::string version;

  const TaskMetric* find(std::string_view name, int delay) const;
  // Test value of a metric; throws std::out_of_range when absent or undefined.
  double test_value(std::string_view name, int delay) const;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);
// Trains on Forecast(1) and closes the loop for `horizon` steps.
ExperimentResult run_autonomous(const ExperimentSpec& spec, int horizon);

using Predictor = std::function<double(std::span<const double> features)>;
struct ClosedLoop {
  std::vector<double> predictions;
  long clipped = 0;
};
// Feeds predictor(previous row) back as the next input for `horizon` steps.
// The first prediction is made from `last_row`.
ClosedLoop closed_loop(Reservoir& reservoir, const Predictor& predictor, std::span<const double> last_row,
                       int horizon, double clip_min, double clip_max, double input_scale = 1.0,
                       double input_offset = 0.0);

struct FadingTrace {
  std::vector<long> steps;
  std::vector<double> distance;  // Euclidean distance between the two feature rows
};

// Two trajectories of the spec's inputs that differ only at `flip_step`. When
// `original_value` is set, it replaces the input at `flip_step` in the reference trajectory.
FadingTrace fading_memory_probe(const ExperimentSpec& spec, long flip_step, double altered_value, int horizon,
                                std::optional<double> original_value = std::nullopt);

// Boson-reduced state after feeding the first `step` inputs of the spec.
ComplexMatrix reservoir_snapshot(const ExperimentSpec& spec, long step);

std::string library_version();

}  // namespace jcqrc
