#include "jcqrc/pipeline.hpp"

#include "jcqrc/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#ifndef JCQRC_VERSION
#define JCQRC_VERSION "0.0.0"
#endif

namespace jcqrc {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Rows {
  Index begin;
  Index end;
  Index size() const { return end - begin; }
};

RealVector slice(const RealVector& v, Rows r) { return v.segment(r.begin, r.size()); }
FeatureMatrix slice(const FeatureMatrix& m, Rows r) { return m.middleRows(r.begin, r.size()); }

PredictionTrace make_trace(std::string name, int delay, Rows rows, const RealVector& target,
                           const RealVector& predicted) {
  PredictionTrace t;
  t.name = std::move(name);
  t.delay = delay;
  for (Index i = 0; i < rows.size(); ++i) {
    t.steps.push_back(static_cast<long>(rows.begin + i));
    t.target.push_back(target(i));
    t.predicted.push_back(predicted(i));
  }
  return t;
}

int max_delay(const TaskSpec& task) {
  return task.delays.empty() ? 0 : *std::max_element(task.delays.begin(), task.delays.end());
}

ExperimentResult fresh_result(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.spec = spec;
  result.version = library_version();
  return result;
}

void finish(ExperimentResult& result, const Reservoir& reservoir, Clock::time_point start) {
  result.diagnostics = reservoir.diagnostics();
  const Warnings w = reservoir.warnings();
  result.warnings.insert(result.warnings.end(), w.begin(), w.end());
  result.seconds = elapsed_since(start);
}

// STM and PC: one trajectory, one readout per tau.
ExperimentResult run_memory_task(const ExperimentSpec& spec) {
  const auto start = Clock::now();
  ExperimentResult result = fresh_result(spec);
  const Split split = spec.resolved_split();
  const std::vector<double> inputs = make_inputs(spec);
  const ReservoirRun run = run_reservoir(spec, inputs);
  result.warnings = run.warnings;

  for (int tau : spec.task.delays) {
    const TaskDataset data = spec.task.kind == TaskKind::STM ? stm_from_inputs(inputs, tau, split)
                                                            : pc_from_inputs(inputs, tau, split);
    const Rows train{std::max<Index>(split.washout, data.valid_from), split.washout + split.train};
    const Rows test{split.washout + split.train, split.total()};
    TaskMetric metric{"capacity", tau, std::nullopt, std::nullopt, {}};
    if (train.size() < 2) {
      metric.note = "training window shorter than 2 rows after the delay";
      result.metrics.push_back(metric);
      result.models.emplace_back();
      continue;
    }
    RidgeModel model = ridge_fit(slice(run.features, train), slice(data.targets, train),
                                 spec.config.ridge_lambda, spec.ridge);
    const RealVector y_train = slice(data.targets, train);
    const RealVector p_train = ridge_predict(model, slice(run.features, train));
    metric.train = capacity(as_span(y_train), as_span(p_train), &result.warnings);
    if (test.size() >= 2) {
      const RealVector y_test = slice(data.targets, test);
      const RealVector p_test = ridge_predict(model, slice(run.features, test));
      metric.test = capacity(as_span(y_test), as_span(p_test), &result.warnings);
      result.traces.push_back(make_trace("capacity", tau, test, y_test, p_test));
    } else {
      metric.note = "test window shorter than 2 rows";
    }
    result.metrics.push_back(metric);
    result.models.push_back(std::move(model));
  }
  result.diagnostics = run.diagnostics;
  result.seconds = elapsed_since(start);
  return result;
}

void add_autonomous(ExperimentResult& result, const ExperimentSpec& spec, const Reservoir& trained,
                    const FeatureMatrix& features, const MgSeries& window, const RidgeModel& model,
                    int horizon) {
  const Split split = spec.resolved_split();
  const TaskSpec& task = spec.task;
  const int early = std::min(task.early_window, horizon);
  if (horizon <= 0) {
    result.metrics.push_back({"rmse_autonomous", 0, std::nullopt, std::nullopt, "horizon 0: RMSE undefined"});
    return;
  }
  const Index last = split.washout + split.train - 1;
  const RealVector last_row = features.row(last).transpose();
  Reservoir branch = trained;
  const Predictor predict = [&model](std::span<const double> row) {
    const Eigen::Map<const RealVector> x(row.data(), static_cast<Index>(row.size()));
    return model.weights.dot(x) + model.bias;
  };
  const ClosedLoop loop = closed_loop(branch, predict, as_span(last_row), horizon, task.clip_min, task.clip_max,
                                      task.input_scale, task.input_offset);
  if (loop.clipped > 0)
    result.warnings.push_back("autonomous: " + std::to_string(loop.clipped) + " predictions clipped to [" +
                              std::to_string(task.clip_min) + ", " + std::to_string(task.clip_max) +
                              "] before re-injection");

  const auto first = static_cast<std::size_t>(last + 1);
  std::vector<double> truth(window.values.begin() + static_cast<std::ptrdiff_t>(first),
                            window.values.begin() + static_cast<std::ptrdiff_t>(first + horizon));
  const std::span<const double> truth_span(truth);
  const std::span<const double> pred_span(loop.predictions);
  result.metrics.push_back({"rmse_autonomous", horizon, std::nullopt, scaled_rmse(truth_span, pred_span), {}});
  if (early > 0 && early < horizon) {
    result.metrics.push_back({"rmse_autonomous_early", early, std::nullopt,
                              scaled_rmse(truth_span.first(early), pred_span.first(early)), {}});
  }
  PredictionTrace trace;
  trace.name = "rmse_autonomous";
  trace.delay = horizon;
  for (int h = 0; h < horizon; ++h) {
    trace.steps.push_back(static_cast<long>(first) + h);
    trace.target.push_back(truth[static_cast<std::size_t>(h)]);
    trace.predicted.push_back(loop.predictions[static_cast<std::size_t>(h)]);
  }
  result.traces.push_back(std::move(trace));
}

ExperimentResult run_mackey_glass(const ExperimentSpec& spec, bool forecast, bool autonomous, int horizon) {
  const auto start = Clock::now();
  ExperimentResult result = fresh_result(spec);
  const Split split = spec.resolved_split();
  const MgSeries window = make_mg_window(spec);
  const TaskSpec& task = spec.task;

  Reservoir reservoir(spec);
  const auto width = static_cast<Index>(reservoir.feature_width());
  FeatureMatrix features(split.total(), width);
  // Row-major scratch; Eigen's default storage is column-major.
  RealVector row(width);
  const Index trained_until = split.washout + split.train;
  std::optional<Reservoir> snapshot;
  for (Index i = 0; i < split.total(); ++i) {
    const double beta = task.input_scale * window.values[static_cast<std::size_t>(i)] + task.input_offset;
    reservoir.step(beta, std::span<double>(row.data(), static_cast<std::size_t>(width)));
    features.row(i) = row.transpose();
    if (i + 1 == trained_until && autonomous) snapshot = reservoir;
  }
  if (autonomous && !snapshot) snapshot = reservoir;

  const Rows train{split.washout, trained_until};
  const Rows test{trained_until, split.total()};
  auto targets_for = [&](int k) {
    RealVector y(split.total());
    for (Index i = 0; i < split.total(); ++i) y(i) = window.values[static_cast<std::size_t>(i + k)];
    return y;
  };

  std::optional<RidgeModel> one_step;
  if (forecast) {
    for (int k : task.delays) {
      const RealVector y = targets_for(k);
      RidgeModel model = ridge_fit(slice(features, train), slice(y, train), spec.config.ridge_lambda, spec.ridge);
      TaskMetric metric{"rmse_forecast", k, std::nullopt, std::nullopt, {}};
      const RealVector y_train = slice(y, train);
      const RealVector p_train = ridge_predict(model, slice(features, train));
      metric.train = scaled_rmse(as_span(y_train), as_span(p_train));
      if (test.size() >= 1) {
        const RealVector y_test = slice(y, test);
        const RealVector p_test = ridge_predict(model, slice(features, test));
        metric.test = scaled_rmse(as_span(y_test), as_span(p_test));
        result.traces.push_back(make_trace("rmse_forecast", k, test, y_test, p_test));
      } else {
        metric.note = "empty test window";
      }
      result.metrics.push_back(metric);
      if (k == 1) one_step = model;
      result.models.push_back(std::move(model));
    }
  }
  if (autonomous) {
    if (!one_step) {
      const RealVector y = targets_for(1);
      one_step = ridge_fit(slice(features, train), slice(y, train), spec.config.ridge_lambda, spec.ridge);
      result.models.push_back(*one_step);
    }
    add_autonomous(result, spec, *snapshot, features, window, *one_step, horizon);
  }
  finish(result, reservoir, start);
  return result;
}

}  // namespace

std::string library_version() { return JCQRC_VERSION; }

Split ExperimentSpec::resolved_split() const {
  if (split) return *split;
  if (task.kind == TaskKind::MackeyGlass) return {1000, 1000, 150};
  return {1000, 1500, 1000};
}

void ExperimentSpec::validate() const {
  config.validate();
  const Split s = resolved_split();
  s.validate();
  if (task.delays.empty()) throw ConfigError("task: at least one delay is required");
  const int min_delay = task.kind == TaskKind::STM ? 0 : 1;
  for (int d : task.delays)
    if (d < min_delay)
      throw ConfigError("task " + std::string(to_string(task.kind)) + ": delays must be >= " +
                        std::to_string(min_delay));
  if (task.kind != TaskKind::MackeyGlass && max_delay(task) >= s.total())
    throw ConfigError("task: delay exceeds the sequence length");
  if (task.kind == TaskKind::MackeyGlass) {
    task.mg.validate();
    if (task.segment < 0 || task.segment_stride < 0) throw ConfigError("task: segment and stride must be >= 0");
    if (task.horizon < 0 || task.early_window < 0) throw ConfigError("task: horizon must be >= 0");
    if (!(task.clip_min < task.clip_max)) throw ConfigError("task: clip_min must be below clip_max");
    if (!std::isfinite(task.input_scale) || !std::isfinite(task.input_offset))
      throw ConfigError("task: input scaling must be finite");
  } else if (task.autonomous) {
    throw ConfigError("task: autonomous generation needs the mackey_glass task");
  }
  if (propagation.rk4_substeps_per_node < 1) throw ConfigError("propagation: rk4 substeps must be >= 1");
  if (!(propagation.action_tolerance > 0.0)) throw ConfigError("propagation: tolerance must be positive");
  if (!(propagation.action_substep_norm > 0.0) || propagation.action_substep_norm > 30.0)
    throw ConfigError("propagation: action_substep_norm must lie in (0, 30]");
  if (!(monitoring.positivity_tolerance >= 0.0) || !(monitoring.population_threshold >= 0.0))
    throw ConfigError("monitoring: thresholds must be >= 0");
  // Throws on observable/model mismatch.
  FeatureExtractor(observables, config.model, config.layout());
}

void RunDiagnostics::merge(const RunDiagnostics& other) {
  steps += other.steps;
  max_trace_defect = std::max(max_trace_defect, other.max_trace_defect);
  max_hermiticity_defect = std::max(max_hermiticity_defect, other.max_hermiticity_defect);
  min_eigenvalue = std::min(min_eigenvalue, other.min_eigenvalue);
  max_top_population = std::max(max_top_population, other.max_top_population);
  positivity_violations += other.positivity_violations;
  population_violations += other.population_violations;
}

Reservoir::Reservoir(const ExperimentSpec& spec)
    : config_(spec.config),
      monitoring_(spec.monitoring),
      propagator_(spec.config, spec.propagation),
      extractor_(spec.observables, spec.config.model, spec.config.layout()),
      rho_(initial_state(spec.config).matrix()) {}

std::vector<std::string> Reservoir::feature_names() const {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < nodes_count(); ++k)
    for (const auto& name : extractor_.names()) out.push_back("k" + std::to_string(k + 1) + ":" + name);
  return out;
}

void Reservoir::set_state(const ComplexMatrix& rho) {
  if (rho.rows() != rho_.rows() || rho.cols() != rho_.cols())
    throw DimensionError("reservoir: state dimension mismatch");
  rho_ = rho;
}

void Reservoir::step(double beta, std::span<double> row) {
  if (row.size() != feature_width()) throw DimensionError("reservoir: feature row has wrong width");
  try {
    propagator_.propagate_interval(rho_, beta, nodes_);
  } catch (const PropagationError& e) {
    throw PropagationError("step " + std::to_string(diagnostics_.steps) + ": " + e.what());
  }
  const std::size_t width = extractor_.size();
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    extractor_.extract(nodes_[k], row.subspan(k * width, width));
    monitor(nodes_[k], k + 1 == nodes_.size());
  }
  ++diagnostics_.steps;
}

void Reservoir::monitor(const ComplexMatrix& rho, bool end_of_interval) {
  const Complex trace = rho.trace();
  diagnostics_.max_trace_defect = std::max(diagnostics_.max_trace_defect, std::abs(trace - Complex(1.0, 0.0)));
  diagnostics_.max_hermiticity_defect = std::max(diagnostics_.max_hermiticity_defect, hermiticity_defect(rho));
  if (is_bosonic(config_.model)) {
    const double top = DensityMatrix(config_.layout(), rho).top_level_population(2);
    diagnostics_.max_top_population = std::max(diagnostics_.max_top_population, top);
    if (end_of_interval && top > monitoring_.population_threshold) {
      if (diagnostics_.population_violations == 0) diagnostics_.first_population_violation = diagnostics_.steps;
      ++diagnostics_.population_violations;
    }
  }
  if (end_of_interval) {
    const ComplexMatrix hermitian = 0.5 * (rho + rho.adjoint());
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    const double lowest = solver.eigenvalues().minCoeff();
    diagnostics_.min_eigenvalue = std::min(diagnostics_.min_eigenvalue, lowest);
    if (lowest < -monitoring_.positivity_tolerance) {
      if (diagnostics_.positivity_violations == 0) diagnostics_.first_positivity_violation = diagnostics_.steps;
      ++diagnostics_.positivity_violations;
    }
  }
}

Warnings Reservoir::warnings() const {
  Warnings out;
  const auto& d = diagnostics_;
  if (d.positivity_violations > 0)
    out.push_back("positivity: " + std::to_string(d.positivity_violations) + " steps with eigenvalue below -" +
                  std::to_string(monitoring_.positivity_tolerance) + ", first at step " +
                  std::to_string(d.first_positivity_violation) + ", min " + std::to_string(d.min_eigenvalue));
  if (d.population_violations > 0)
    out.push_back("truncation: top-two-level population above " + std::to_string(monitoring_.population_threshold) +
                  " in " + std::to_string(d.population_violations) + " steps, first at step " +
                  std::to_string(d.first_population_violation) + ", max " + std::to_string(d.max_top_population));
  return out;
}

MgSeries make_mg_window(const ExperimentSpec& spec) {
  const Split split = spec.resolved_split();
  const TaskSpec& task = spec.task;
  const auto needed = static_cast<std::size_t>(
      std::max(split.total() + max_delay(task), split.washout + split.train + task.horizon) + 1);
  const auto offset = static_cast<std::size_t>(task.segment) * static_cast<std::size_t>(task.segment_stride);
  const MgSeries full = gen_mackey_glass(static_cast<double>(offset + needed) * task.mg.sampling, task.mg);
  return mg_segment(full, offset, needed);
}

std::vector<double> make_inputs(const ExperimentSpec& spec) {
  const auto total = static_cast<std::size_t>(spec.resolved_split().total());
  switch (spec.task.kind) {
    case TaskKind::STM: return uniform_inputs(total, spec.config.seed);
    case TaskKind::PC: return binary_inputs(total, spec.config.seed);
    case TaskKind::MackeyGlass: {
      const MgSeries window = make_mg_window(spec);
      std::vector<double> out(window.values.begin(), window.values.begin() + static_cast<std::ptrdiff_t>(total));
      for (auto& v : out) v = spec.task.input_scale * v + spec.task.input_offset;
      return out;
    }
  }
  throw ConfigError("unknown task kind");
}

ReservoirRun run_reservoir(const ExperimentSpec& spec, std::span<const double> inputs) {
  Reservoir reservoir(spec);
  const auto width = static_cast<Index>(reservoir.feature_width());
  ReservoirRun run;
  run.features.resize(static_cast<Index>(inputs.size()), width);
  RealVector row(width);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    reservoir.step(inputs[i], std::span<double>(row.data(), static_cast<std::size_t>(width)));
    run.features.row(static_cast<Index>(i)) = row.transpose();
  }
  run.diagnostics = reservoir.diagnostics();
  run.warnings = reservoir.warnings();
  return run;
}

FeatureMatrix run_reservoir(const ExperimentSpec& spec) {
  spec.validate();
  const std::vector<double> inputs = make_inputs(spec);
  return run_reservoir(spec, inputs).features;
}

const TaskMetric* ExperimentResult::find(std::string_view name, int delay) const {
  for (const auto& m : metrics)
    if (m.name == name && m.delay == delay) return &m;
  return nullptr;
}

double ExperimentResult::test_value(std::string_view name, int delay) const {
  const TaskMetric* m = find(name, delay);
  if (!m || !m->test)
    throw std::out_of_range("no test value for metric " + std::string(name) + " at delay " + std::to_string(delay));
  return *m->test;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.task.kind == TaskKind::MackeyGlass)
    return run_mackey_glass(spec, true, spec.task.autonomous, spec.task.horizon);
  return run_memory_task(spec);
}

ExperimentResult run_autonomous(const ExperimentSpec& spec, int horizon) {
  if (spec.task.kind != TaskKind::MackeyGlass) throw ConfigError("autonomous generation needs the mackey_glass task");
  if (horizon < 0) throw ConfigError("autonomous horizon must be >= 0");
  ExperimentSpec resolved = spec;
  resolved.task.autonomous = true;
  resolved.task.horizon = horizon;
  resolved.validate();
  if (horizon == 0) {
    ExperimentResult result = fresh_result(resolved);
    result.metrics.push_back({"rmse_autonomous", 0, std::nullopt, std::nullopt, "horizon 0: RMSE undefined"});
    return result;
  }
  return run_mackey_glass(resolved, false, true, horizon);
}

ClosedLoop closed_loop(Reservoir& reservoir, const Predictor& predictor, std::span<const double> last_row,
                       int horizon, double clip_min, double clip_max, double input_scale, double input_offset) {
  if (last_row.size() != reservoir.feature_width()) throw DimensionError("closed loop: row width mismatch");
  ClosedLoop out;
  std::vector<double> row(last_row.begin(), last_row.end());
  for (int h = 0; h < horizon; ++h) {
    const double y = predictor(row);
    if (!std::isfinite(y)) throw NumericalError("closed loop: non-finite prediction at step " + std::to_string(h));
    out.predictions.push_back(y);
    if (h + 1 == horizon) break;
    const double fed = std::clamp(y, clip_min, clip_max);
    if (fed != y) ++out.clipped;
    reservoir.step(input_scale * fed + input_offset, row);
  }
  return out;
}

FadingTrace fading_memory_probe(const ExperimentSpec& spec, long flip_step, double altered_value, int horizon,
                                std::optional<double> original_value) {
  spec.validate();
  if (horizon < 0) throw ConfigError("fading memory: horizon must be >= 0");
  if (!std::isfinite(altered_value) || (original_value && !std::isfinite(*original_value)))
    throw ConfigError("fading memory: input values must be finite");
  const Split split = spec.resolved_split();
  const std::vector<double> inputs = make_inputs(spec);
  if (flip_step < split.washout) throw ConfigError("fading memory: flip_step must not precede the end of washout");
  if (flip_step + horizon >= static_cast<long>(inputs.size()))
    throw ConfigError("fading memory: flip_step + horizon exceeds the input sequence");

  Reservoir original(spec);
  std::vector<double> row_a(original.feature_width());
  std::vector<double> row_b(original.feature_width());
  for (long i = 0; i < flip_step; ++i) original.step(inputs[static_cast<std::size_t>(i)], row_a);
  Reservoir altered = original;

  FadingTrace trace;
  for (long i = flip_step; i <= flip_step + horizon; ++i) {
    const double beta = i == flip_step && original_value ? *original_value : inputs[static_cast<std::size_t>(i)];
    original.step(beta, row_a);
    altered.step(i == flip_step ? altered_value : beta, row_b);
    double sum = 0.0;
    for (std::size_t c = 0; c < row_a.size(); ++c) sum += (row_a[c] - row_b[c]) * (row_a[c] - row_b[c]);
    trace.steps.push_back(i);
    trace.distance.push_back(std::sqrt(sum));
  }
  return trace;
}

ComplexMatrix reservoir_snapshot(const ExperimentSpec& spec, long step) {
  spec.validate();
  const std::vector<double> inputs = make_inputs(spec);
  if (step < 0 || step > static_cast<long>(inputs.size()))
    throw ConfigError("snapshot step must lie in [0, " + std::to_string(inputs.size()) + "]");
  Reservoir reservoir(spec);
  std::vector<double> row(reservoir.feature_width());
  for (long i = 0; i < step; ++i) reservoir.step(inputs[static_cast<std::size_t>(i)], row);
  return partial_trace_qubit(reservoir.state(), spec.config.layout());
}

}  // namespace jcqrc
