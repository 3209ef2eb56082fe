// Micro benchmarks for the hot paths: one input interval, feature extraction,
// the ridge fit and a Wigner map.
#include "jcqrc/dynamics.hpp"
#include "jcqrc/learning.hpp"
#include "jcqrc/readout.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

using namespace jcqrc;

ReservoirConfig bench_config(int n_levels, int virtual_nodes) {
  ReservoirConfig c;
  c.model = Model::JC;
  c.delta_b = 1.0;
  c.chi = 1.0;
  c.kappa = 0.1;
  c.dt = 10.0;
  c.n_levels = n_levels;
  c.virtual_nodes = virtual_nodes;
  return c;
}

// A driven, mixed state to measure against.
ComplexMatrix driven_state(const ReservoirConfig& c) {
  Propagator p(c);
  ComplexMatrix rho = initial_state(c).matrix();
  std::vector<ComplexMatrix> nodes;
  for (double beta : {0.3, 0.8, 0.5, 0.1}) p.propagate_interval(rho, beta, nodes);
  return rho;
}

void interval(benchmark::State& state, PropagationMethod method) {
  const ReservoirConfig c = bench_config(static_cast<int>(state.range(0)), 5);
  PropagationOptions o;
  o.method = method;
  Propagator p(c, o);
  const ComplexMatrix start = driven_state(c);
  std::vector<ComplexMatrix> nodes;
  double beta = 0.0;
  for (auto _ : state) {
    ComplexMatrix rho = start;
    beta = beta > 0.9 ? 0.05 : beta + 0.1;
    p.propagate_interval(rho, beta, nodes);
    benchmark::DoNotOptimize(rho.data());
  }
}

void BM_IntervalExpAction(benchmark::State& state) { interval(state, PropagationMethod::ExpAction); }
void BM_IntervalSuperopExp(benchmark::State& state) { interval(state, PropagationMethod::SuperopExp); }
void BM_IntervalRK4(benchmark::State& state) { interval(state, PropagationMethod::RK4); }

BENCHMARK(BM_IntervalExpAction)->Arg(10)->Arg(15)->Arg(20)->Unit(benchmark::kMillisecond);
// Few iterations fit in the time budget here, so SuperopExp mostly measures building the per-beta propagator.
BENCHMARK(BM_IntervalSuperopExp)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntervalRK4)->Arg(10)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_Features(benchmark::State& state) {
  const ReservoirConfig c = bench_config(15, 1);
  ObservableSet set;
  set.kind = static_cast<ObservableKind>(state.range(0));
  FeatureExtractor fx(set, c.model, c.layout());
  const ComplexMatrix rho = driven_state(c);
  std::vector<double> row(fx.size());
  for (auto _ : state) {
    fx.extract(rho, row);
    benchmark::DoNotOptimize(row.data());
  }
  state.SetLabel(std::string(to_string(set.kind)));
}
BENCHMARK(BM_Features)->Arg(static_cast<int>(ObservableKind::Moments))->Arg(static_cast<int>(ObservableKind::RdmSmall));

void BM_RidgeFit(benchmark::State& state) {
  const Index rows = 1500, cols = state.range(0);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  FeatureMatrix x(rows, cols);
  RealVector y(rows);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) x(i, j) = g(rng);
    y(i) = g(rng);
  }
  for (auto _ : state) {
    RidgeModel m = ridge_fit(x, y, 0.05);
    benchmark::DoNotOptimize(m.weights.data());
  }
}
BENCHMARK(BM_RidgeFit)->Arg(70)->Arg(350)->Arg(700)->Unit(benchmark::kMillisecond);

void BM_Wigner(benchmark::State& state) {
  const ReservoirConfig c = bench_config(15, 1);
  const ComplexMatrix rho_b = partial_trace_qubit(driven_state(c), c.layout());
  WignerGrid grid;
  grid.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) {
    RealMatrix w = wigner(rho_b, grid);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(BM_Wigner)->Arg(51)->Arg(101)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
