// tasks.hpp: input/target generators for the memory and forecasting benchmarks.
#pragma once

#include "jcqrc/hilbert.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace jcqrc {

enum class TaskKind {
  STM,          // y_i = s_{i - tau}, s uniform on (0, 1)
  PC,           // y_i = (s_{i-1} + ... + s_{i-tau}) mod 2, s in {0, 1}
  MackeyGlass,  // y_i = s_{i + k} on a sampled Mackey-Glass series
};

std::string_view to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view name);

struct Split {
  int washout = 1000;
  int train = 1500;
  int test = 1000;

  int total() const { return washout + train + test; }
  void validate() const;
};

struct TaskDataset {
  TaskKind kind = TaskKind::STM;
  RealVector inputs;
  RealVector targets;
  Split split;
  int delay = 0;       // tau for STM/PC, k for Mackey-Glass forecasting
  int valid_from = 0;  // first index whose target is defined (zero padding before it)
  std::string descriptor;
};

// Deterministic stream of uniform draws on the open interval (0, 1).
std::vector<double> uniform_inputs(std::size_t length, std::uint64_t seed);
std::vector<double> binary_inputs(std::size_t length, std::uint64_t seed);

TaskDataset stm_from_inputs(const std::vector<double>& inputs, int tau, Split split = {});
TaskDataset pc_from_inputs(const std::vector<double>& inputs, int tau, Split split = {});
// Split defaults to {1000, 1500, 1000} and is shrunk if `length` is smaller.
TaskDataset gen_stm(int length, int tau, std::uint64_t seed);
TaskDataset gen_pc(int length, int tau, std::uint64_t seed);

struct MgOptions {
  double tau_delay = 17.0;
  double h = 0.05;                  // integrator step
  double sampling = 3.0;            // MG time per reservoir step
  double washout_discard = 1.0e4;   // transient integrated and dropped
  double history = 1.2;             // constant history s(t <= 0)
  double perturbation = 0.0;        // added to the history

  void validate() const;
};

struct MgSeries {
  MgOptions options;
  std::vector<double> values;  // s(t0 + i * sampling) after the discarded transient
};

// Fixed-step RK4 on ds/dt = -0.1 s + 0.2 s(t - tau) / (1 + s(t - tau)^10), with the
// delayed value linearly interpolated from the dense step history.
MgSeries gen_mackey_glass(double total_time, const MgOptions& options = {});

enum class MgMode { Forecast, Autonomous };

// Forecast(k): input s_i, target s_{i+k}. Autonomous uses the Forecast(1) pairs
// for training; the pipeline closes the loop at evaluation.
TaskDataset mg_targets(const MgSeries& series, MgMode mode, int k = 1, Split split = {1000, 1000, 150});

// Window of `length` samples starting at `offset`.
MgSeries mg_segment(const MgSeries& series, std::size_t offset, std::size_t length);

// CSV with header "step,input,target".
void write_dataset_csv(const TaskDataset& dataset, std::ostream& out);
TaskDataset read_dataset_csv(std::istream& in, TaskKind kind, Split split, int delay = 0);

}  // namespace jcqrc
