#include "jcqrc/error.hpp"
#include "jcqrc/manifest.hpp"
#include "jcqrc/pipeline.hpp"
#include "jcqrc/sweep.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace jcqrc {
namespace {

ExperimentSpec small_stm(int levels = 8) {
  ExperimentSpec s;
  s.config.n_levels = levels;
  s.config.virtual_nodes = 1;
  s.split = Split{30, 120, 60};
  s.task.kind = TaskKind::STM;
  s.task.delays = {0, 1};
  return s;
}

ExperimentSpec small_mg() {
  ExperimentSpec s;
  s.config.n_levels = 8;
  s.config.delta_b = 2.0;
  s.config.delta = 1.5;
  s.config.chi = 0.6;
  s.config.virtual_nodes = 2;
  s.split = Split{40, 150, 20};
  s.task.kind = TaskKind::MackeyGlass;
  s.task.delays = {1};
  s.task.horizon = 20;
  s.task.early_window = 8;
  s.task.mg.washout_discard = 500.0;
  return s;
}

TEST(RunReservoir, ShapesAndMultiplexingConsistency) {
  ExperimentSpec one = small_stm(10);
  const std::vector<double> inputs{0.3, 0.8, 0.5};
  const ReservoirRun r1 = run_reservoir(one, inputs);
  EXPECT_EQ(r1.features.rows(), 3);
  EXPECT_EQ(r1.features.cols(), 40);
  ExperimentSpec five = one;
  five.config.virtual_nodes = 5;
  const ReservoirRun r5 = run_reservoir(five, inputs);
  EXPECT_EQ(r5.features.cols(), 200);
  EXPECT_LT((r5.features.rightCols(40) - r1.features).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_EQ(r1.diagnostics.steps, 3);
}

TEST(RunReservoir, UndrivenDispersiveDecaysToVacuum) {
  ExperimentSpec s = small_stm();
  s.config.model = Model::DJC;
  s.config.alpha = 0.0;
  const std::vector<double> zeros(5, 0.0);
  const ReservoirRun r = run_reservoir(s, zeros);
  EXPECT_EQ(r.features.cwiseAbs().maxCoeff(), 0.0);
}

TEST(RunReservoir, BitIdenticalReruns) {
  const ExperimentSpec s = small_stm();
  const FeatureMatrix a = run_reservoir(s);
  const FeatureMatrix b = run_reservoir(s);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rows(), 210);
}

TEST(RunReservoir, MonitorsTruncation) {
  ExperimentSpec s = small_stm(2);
  const ReservoirRun r = run_reservoir(s, make_inputs(s));
  EXPECT_GT(r.diagnostics.max_top_population, 1e-4);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("truncation"), std::string::npos);
}

TEST(Experiment, StmMetricsAreCapacities) {
  const ExperimentResult r = run_experiment(small_stm());
  ASSERT_EQ(r.metrics.size(), 2u);
  for (const auto& m : r.metrics) {
    ASSERT_TRUE(m.test.has_value());
    EXPECT_GE(*m.test, 0.0);
    EXPECT_LE(*m.test, 1.0);
  }
  EXPECT_GT(r.test_value("capacity", 0), r.test_value("capacity", 1));
  EXPECT_EQ(r.models.size(), 2u);
  EXPECT_EQ(r.version, library_version());
  EXPECT_FALSE(to_json(r)["spec"].empty());
}

TEST(Experiment, LeastSquaresCapacityGrowsWithFeatures) {
  ExperimentSpec s = small_stm();
  s.config.virtual_nodes = 3;
  const std::vector<double> inputs = make_inputs(s);
  const ReservoirRun run = run_reservoir(s, inputs);
  const RealVector y = Eigen::Map<const RealVector>(inputs.data(), static_cast<Index>(inputs.size()));
  double previous = 0.0;
  for (Index cols : {5, 20, 40, 80, 120}) {
    const FeatureMatrix x = run.features.leftCols(cols);
    const RidgeModel m = ridge_fit(x, y, 0.0);
    const RealVector p = ridge_predict(m, x);
    const double c = capacity(as_span(y), as_span(p));
    EXPECT_GE(c, previous - 1e-10) << cols;
    previous = c;
  }
}

TEST(Experiment, ParityTask) {
  ExperimentSpec s = small_stm();
  s.task.kind = TaskKind::PC;
  s.task.delays = {1, 2};
  const ExperimentResult r = run_experiment(s);
  EXPECT_EQ(r.metrics.size(), 2u);
  s.task.delays = {0};
  EXPECT_THROW(run_experiment(s), ConfigError);
}

TEST(Experiment, MackeyGlassForecastAndAutonomous) {
  ExperimentSpec s = small_mg();
  s.task.autonomous = true;
  const ExperimentResult r = run_experiment(s);
  EXPECT_NE(r.find("rmse_forecast", 1), nullptr);
  EXPECT_NE(r.find("rmse_autonomous", 20), nullptr);
  EXPECT_NE(r.find("rmse_autonomous_early", 8), nullptr);
  EXPECT_GE(r.test_value("rmse_forecast", 1), 0.0);
  bool found = false;
  for (const auto& t : r.traces) {
    if (t.name != "rmse_autonomous") continue;
    found = true;
    EXPECT_EQ(t.predicted.size(), 20u);
    EXPECT_EQ(t.steps.front(), 190);
  }
  EXPECT_TRUE(found);

  const ExperimentResult a = run_autonomous(small_mg(), 20);
  EXPECT_EQ(a.test_value("rmse_autonomous", 20), r.test_value("rmse_autonomous", 20));
  const ExperimentResult zero = run_autonomous(small_mg(), 0);
  ASSERT_EQ(zero.metrics.size(), 1u);
  EXPECT_FALSE(zero.metrics[0].test.has_value());
  EXPECT_FALSE(zero.metrics[0].note.empty());
}

TEST(ClosedLoop, OraclePredictorHasZeroError) {
  const ExperimentSpec s = small_mg();
  const MgSeries window = make_mg_window(s);
  Reservoir reservoir(s);
  std::vector<double> row(reservoir.feature_width());
  for (int i = 0; i < 50; ++i) reservoir.step(window.values[static_cast<std::size_t>(i)], row);
  int calls = 0;
  const Predictor oracle = [&](std::span<const double>) { return window.values[static_cast<std::size_t>(50 + calls++)]; };
  const ClosedLoop loop = closed_loop(reservoir, oracle, row, 15, 0.0, 2.0);
  const std::vector<double> truth(window.values.begin() + 50, window.values.begin() + 65);
  EXPECT_EQ(scaled_rmse(truth, loop.predictions), 0.0);
  EXPECT_EQ(loop.clipped, 0);

  const Predictor wild = [](std::span<const double>) { return 5.0; };
  EXPECT_EQ(closed_loop(reservoir, wild, row, 4, 0.0, 2.0).clipped, 3);
  const Predictor broken = [](std::span<const double>) { return NAN; };
  EXPECT_THROW(closed_loop(reservoir, broken, row, 4, 0.0, 2.0), NumericalError);
}

TEST(FadingMemory, IdenticalInputGivesZeroTrace) {
  ExperimentSpec s = small_stm();
  const std::vector<double> inputs = make_inputs(s);
  const FadingTrace same = fading_memory_probe(s, 40, inputs[40], 5);
  for (double d : same.distance) EXPECT_EQ(d, 0.0);
  const FadingTrace diff = fading_memory_probe(s, 40, inputs[40] > 0.5 ? 0.1 : 0.9, 5);
  ASSERT_EQ(diff.distance.size(), 6u);
  EXPECT_EQ(*std::max_element(diff.distance.begin(), diff.distance.end()), diff.distance.front());
  EXPECT_THROW(fading_memory_probe(s, 5, 0.2, 3), ConfigError);
}

TEST(FadingMemory, OriginalValueReplacesReferenceInput) {
  ExperimentSpec s = small_stm();
  const FadingTrace same = fading_memory_probe(s, 40, 0.2, 4, 0.2);
  for (double d : same.distance) EXPECT_EQ(d, 0.0);
  std::vector<double> inputs = make_inputs(s);
  inputs[40] = 0.5;
  const FadingTrace a = fading_memory_probe(s, 40, 0.2, 4, 0.5);
  // Equivalent to probing against a run that already had 0.5 at the flip step.
  Reservoir ref(s), alt(s);
  std::vector<double> r(ref.feature_width()), q(alt.feature_width());
  for (std::size_t k = 0; k <= 40; ++k) {
    ref.step(inputs[k], r);
    alt.step(k == 40 ? 0.2 : inputs[k], q);
  }
  double d = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) d += (r[i] - q[i]) * (r[i] - q[i]);
  EXPECT_NEAR(a.distance.front(), std::sqrt(d), 1e-12);
}

TEST(Snapshot, VacuumBeforeDrive) {
  const ComplexMatrix rho_b = reservoir_snapshot(small_stm(), 0);
  EXPECT_EQ(rho_b(0, 0), Complex(1.0, 0.0));
}

TEST(Sweep, SingletonGridMatchesExperiment) {
  SweepSpec sweep;
  sweep.base = small_stm();
  sweep.axes = {{"alpha", {0.0}}};
  const SweepTable t = run_sweep(sweep);
  ASSERT_EQ(t.rows.size(), 1u);
  const ExperimentResult r = run_experiment(sweep.base);
  EXPECT_EQ(t.cell(0, "capacity_0_test"), r.test_value("capacity", 0));
  EXPECT_EQ(t.cell(0, "capacity_1_test"), r.test_value("capacity", 1));
}

TEST(Sweep, OrderingAndWorkerIndependence) {
  SweepSpec sweep;
  sweep.base = small_stm(6);
  sweep.base.split = Split{20, 60, 30};
  sweep.axes = {{"alpha", {0.0, 1.0}}, {"V", {1, 2}}};
  EXPECT_EQ(sweep.point_count(), 4u);
  EXPECT_EQ(sweep.point(1), (std::vector<double>{0.0, 2.0}));
  std::ostringstream a, b;
  write_sweep_csv(run_sweep(sweep, 1), a);
  write_sweep_csv(run_sweep(sweep, 3), b);
  EXPECT_EQ(a.str(), b.str());

  // Re-running one point reproduces its row.
  const SweepTable full = run_sweep(sweep, 1);
  const ExperimentResult point = run_experiment(sweep.point_spec(2));
  EXPECT_EQ(full.cell(2, "capacity_1_test"), point.test_value("capacity", 1));
}

TEST(Sweep, FailuresAreRecorded) {
  SweepSpec sweep;
  sweep.base = small_mg();
  sweep.base.task.input_scale = 1e200;
  sweep.axes = {{"kappa", {0.1, 0.2}}};
  const SweepTable t = run_sweep(sweep, 2);
  ASSERT_EQ(t.rows.size(), 2u);
  for (const auto& row : t.rows) {
    EXPECT_FALSE(row.ok);
    EXPECT_NE(row.error.find("step"), std::string::npos) << row.error;
  }
  SweepSpec bad;
  bad.base = small_stm();
  bad.axes = {{"n_levels", {1.5}}};
  EXPECT_THROW(run_sweep(bad), ConfigError);
  bad.axes = {{"omega", {1.0}}};
  EXPECT_THROW(run_sweep(bad), ConfigError);
}

TEST(Sweep, SegmentAverage) {
  SweepSpec sweep;
  sweep.base = small_mg();
  sweep.aggregation = Aggregation::SegmentAverage;
  sweep.segments = 3;
  const SweepTable t = run_sweep(sweep, 2);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.cell(0, "segments_ok"), 3.0);
  EXPECT_GE(t.cell(0, "rmse_forecast_1_test_std"), 0.0);
  std::vector<double> each;
  for (int seg = 0; seg < 3; ++seg) {
    ExperimentSpec s = sweep.base;
    s.task.segment = seg;
    each.push_back(run_experiment(s).test_value("rmse_forecast", 1));
  }
  EXPECT_NEAR(t.cell(0, "rmse_forecast_1_test_mean"), (each[0] + each[1] + each[2]) / 3.0, 1e-15);
  EXPECT_NE(each[0], each[1]);
}

TEST(Convergence, ReportsTopPopulation) {
  ExperimentSpec base = small_stm();
  base.task.delays = {0};
  const SweepTable t = convergence_study(base, {2, 6}, {0.1});
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_GT(t.cell(0, "max_top_population"), 1e-4);
  EXPECT_FALSE(t.rows[0].warnings.empty());
  EXPECT_LT(t.cell(1, "max_top_population"), t.cell(0, "max_top_population"));
}

TEST(Manifest, RoundTripAndStrictness) {
  RunManifest m;
  m.command = "sweep";
  m.experiment = small_mg();
  m.axes = {{"chi", {0.2, 0.4}}};
  m.aggregation = Aggregation::SegmentAverage;
  m.emit.svg = true;
  const nlohmann::json j = to_json(m);
  const RunManifest back = manifest_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.axes[0].values, m.axes[0].values);

  nlohmann::json unknown = j;
  unknown["reservoir"]["omega"] = 1.0;
  EXPECT_THROW(manifest_from_json(unknown), ConfigError);
  nlohmann::json top = j;
  top["extra"] = 1;
  EXPECT_THROW(manifest_from_json(top), ConfigError);
  nlohmann::json typed = j;
  typed["reservoir"]["kappa"] = "fast";
  EXPECT_THROW(manifest_from_json(typed), ConfigError);
  nlohmann::json model = j;
  model["reservoir"]["model"] = "Kerr";
  EXPECT_THROW(manifest_from_json(model), ConfigError);
}

TEST(Manifest, DefaultSplitFollowsTask) {
  nlohmann::json j = {{"task", {{"kind", "mackey_glass"}}}};
  const ExperimentSpec s = experiment_from_json(j);
  EXPECT_EQ(s.resolved_split().train, 1000);
  EXPECT_EQ(s.resolved_split().test, 150);
  const ExperimentSpec t = experiment_from_json(nlohmann::json::object());
  EXPECT_EQ(t.resolved_split().train, 1500);
}

}  // namespace
}  // namespace jcqrc
