#include "jcqrc/tasks.hpp"

#include "jcqrc/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace jcqrc {

namespace {

Split fit_split(Split split, int length) {
  if (split.total() <= length) return split;
  // Keep the washout/train/test proportions of the requested split.
  const double scale = static_cast<double>(length) / split.total();
  Split out{static_cast<int>(split.washout * scale), static_cast<int>(split.train * scale), 0};
  out.test = length - out.washout - out.train;
  return out;
}

RealVector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const RealVector>(v.data(), static_cast<Index>(v.size()));
}

double mg_rhs(double s, double s_delayed) {
  return -0.1 * s + 0.2 * s_delayed / (1.0 + std::pow(s_delayed, 10));
}

}  // namespace

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::STM: return "stm";
    case TaskKind::PC: return "pc";
    case TaskKind::MackeyGlass: return "mackey_glass";
  }
  return "unknown";
}

TaskKind parse_task_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "stm") return TaskKind::STM;
  if (lower == "pc") return TaskKind::PC;
  if (lower == "mackey_glass" || lower == "mg") return TaskKind::MackeyGlass;
  throw ConfigError("unknown task '" + std::string(name) + "'");
}

void Split::validate() const {
  if (washout < 0 || train <= 0 || test < 0)
    throw ConfigError("split: washout >= 0, train > 0 and test >= 0 required");
}

std::vector<double> uniform_inputs(std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(length);
  // 53-bit mantissa draw shifted by half an ulp keeps values strictly inside (0, 1)
  // and is reproducible across standard libraries.
  for (auto& v : out) v = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  return out;
}

std::vector<double> binary_inputs(std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(length);
  for (auto& v : out) v = static_cast<double>(rng() >> 63);
  return out;
}

TaskDataset stm_from_inputs(const std::vector<double>& inputs, int tau, Split split) {
  if (tau < 0) throw ConfigError("stm: tau must be >= 0");
  if (static_cast<int>(inputs.size()) <= tau) throw ConfigError("stm: length must exceed tau");
  TaskDataset d;
  d.kind = TaskKind::STM;
  d.inputs = to_vector(inputs);
  d.targets = RealVector::Zero(d.inputs.size());
  for (Index i = tau; i < d.inputs.size(); ++i) d.targets(i) = d.inputs(i - tau);
  d.split = fit_split(split, static_cast<int>(inputs.size()));
  d.delay = tau;
  d.valid_from = tau;
  d.descriptor = "stm tau=" + std::to_string(tau);
  return d;
}

TaskDataset pc_from_inputs(const std::vector<double>& inputs, int tau, Split split) {
  if (tau < 1) throw ConfigError("pc: tau must be >= 1");
  if (static_cast<int>(inputs.size()) <= tau) throw ConfigError("pc: length must exceed tau");
  TaskDataset d;
  d.kind = TaskKind::PC;
  d.inputs = to_vector(inputs);
  d.targets = RealVector::Zero(d.inputs.size());
  for (Index i = tau; i < d.inputs.size(); ++i) {
    long sum = 0;
    for (int j = 1; j <= tau; ++j) sum += std::lround(d.inputs(i - j));
    d.targets(i) = static_cast<double>(sum % 2);
  }
  d.split = fit_split(split, static_cast<int>(inputs.size()));
  d.delay = tau;
  d.valid_from = tau;
  d.descriptor = "pc tau=" + std::to_string(tau);
  return d;
}

TaskDataset gen_stm(int length, int tau, std::uint64_t seed) {
  if (length < 1) throw ConfigError("stm: length must be positive");
  return stm_from_inputs(uniform_inputs(static_cast<std::size_t>(length), seed), tau);
}

TaskDataset gen_pc(int length, int tau, std::uint64_t seed) {
  if (length < 1) throw ConfigError("pc: length must be positive");
  return pc_from_inputs(binary_inputs(static_cast<std::size_t>(length), seed), tau);
}

void MgOptions::validate() const {
  if (!(tau_delay > 0.0)) throw ConfigError("mackey_glass: tau_delay must be positive");
  if (!(h > 0.0) || h > 0.1) throw ConfigError("mackey_glass: integrator step must be in (0, 0.1]");
  const double ratio = sampling / h;
  if (!(sampling > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9)
    throw ConfigError("mackey_glass: sampling must be a positive multiple of h");
  if (!(washout_discard >= 0.0)) throw ConfigError("mackey_glass: washout_discard must be >= 0");
  if (!std::isfinite(history) || !std::isfinite(perturbation))
    throw ConfigError("mackey_glass: history must be finite");
}

MgSeries gen_mackey_glass(double total_time, const MgOptions& options) {
  options.validate();
  if (!(total_time >= 0.0)) throw ConfigError("mackey_glass: total_time must be >= 0");
  const double h = options.h;
  const long per_sample = std::lround(options.sampling / h);
  const long discard_steps = std::lround(options.washout_discard / h);
  const long samples = static_cast<long>(std::floor(total_time / options.sampling + 1e-9));
  const long total_steps = discard_steps + samples * per_sample;
  const double s0 = options.history + options.perturbation;

  // history[j] = s(j h) and slope[j] = ds/dt there, j >= 0; s(t <= 0) = s0.
  std::vector<double> history;
  std::vector<double> slope;
  history.reserve(static_cast<std::size_t>(total_steps) + 1);
  slope.reserve(static_cast<std::size_t>(total_steps) + 1);
  history.push_back(s0);
  const double lag = options.tau_delay / h;

  // Cubic Hermite between grid points keeps the delayed term fourth-order accurate.
  auto delayed = [&](double t_steps) {
    const double pos = t_steps - lag;
    if (pos <= 0.0) return s0;
    const auto j = static_cast<std::size_t>(std::floor(pos));
    const double u = pos - static_cast<double>(j);
    if (u == 0.0 || j + 1 >= slope.size()) return history[std::min(j, history.size() - 1)];
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * history[j] + (u3 - 2 * u2 + u) * h * slope[j] +
           (-2 * u3 + 3 * u2) * history[j + 1] + (u3 - u2) * h * slope[j + 1];
  };

  MgSeries series;
  series.options = options;
  series.values.reserve(static_cast<std::size_t>(samples));
  double s = s0;
  for (long step = 0; step < total_steps; ++step) {
    const double t = static_cast<double>(step);
    const double k1 = mg_rhs(s, delayed(t));
    slope.push_back(k1);
    const double dh = delayed(t + 0.5);
    const double d1 = delayed(t + 1.0);
    const double k2 = mg_rhs(s + 0.5 * h * k1, dh);
    const double k3 = mg_rhs(s + 0.5 * h * k2, dh);
    const double k4 = mg_rhs(s + h * k3, d1);
    s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(s)) throw NumericalError("mackey_glass: non-finite state at step " + std::to_string(step));
    history.push_back(s);
    const long done = step + 1;
    if (done > discard_steps && (done - discard_steps) % per_sample == 0) series.values.push_back(s);
  }
  return series;
}

TaskDataset mg_targets(const MgSeries& series, MgMode mode, int k, Split split) {
  if (mode == MgMode::Autonomous) k = 1;
  if (k < 1) throw ConfigError("mackey_glass: forecast horizon k must be >= 1");
  const auto n = static_cast<Index>(series.values.size());
  if (n <= k) throw ConfigError("mackey_glass: series shorter than the forecast horizon");
  TaskDataset d;
  d.kind = TaskKind::MackeyGlass;
  d.inputs.resize(n - k);
  d.targets.resize(n - k);
  for (Index i = 0; i + k < n; ++i) {
    d.inputs(i) = series.values[static_cast<std::size_t>(i)];
    d.targets(i) = series.values[static_cast<std::size_t>(i + k)];
  }
  d.split = fit_split(split, static_cast<int>(n - k));
  d.delay = k;
  d.valid_from = 0;
  d.descriptor = mode == MgMode::Autonomous ? "mackey_glass autonomous" : "mackey_glass forecast k=" + std::to_string(k);
  return d;
}

MgSeries mg_segment(const MgSeries& series, std::size_t offset, std::size_t length) {
  if (offset + length > series.values.size())
    throw ConfigError("mackey_glass: segment [" + std::to_string(offset) + ", " + std::to_string(offset + length) +
                      ") exceeds series of " + std::to_string(series.values.size()) + " samples");
  MgSeries out;
  out.options = series.options;
  out.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(offset),
                    series.values.begin() + static_cast<std::ptrdiff_t>(offset + length));
  return out;
}

void write_dataset_csv(const TaskDataset& dataset, std::ostream& out) {
  out << "step,input,target\n";
  out.precision(17);
  for (Index i = 0; i < dataset.inputs.size(); ++i)
    out << i << ',' << dataset.inputs(i) << ',' << dataset.targets(i) << '\n';
}

TaskDataset read_dataset_csv(std::istream& in, TaskKind kind, Split split, int delay) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("step,input,target", 0) != 0)
    throw ConfigError("dataset csv: expected header 'step,input,target'");
  std::vector<double> inputs, targets;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string step, input, target;
    if (!std::getline(fields, step, ',') || !std::getline(fields, input, ',') || !std::getline(fields, target))
      throw ConfigError("dataset csv: malformed row " + std::to_string(row + 1));
    try {
      inputs.push_back(std::stod(input));
      targets.push_back(std::stod(target));
    } catch (const std::exception&) {
      throw ConfigError("dataset csv: non-numeric value in row " + std::to_string(row + 1));
    }
    ++row;
  }
  TaskDataset d;
  d.kind = kind;
  d.inputs = to_vector(inputs);
  d.targets = to_vector(targets);
  d.split = split;
  d.split.validate();
  if (d.split.total() > row) throw ConfigError("dataset csv: split longer than the data");
  d.delay = delay;
  d.valid_from = kind == TaskKind::MackeyGlass ? 0 : delay;
  d.descriptor = std::string(to_string(kind)) + " (csv)";
  return d;
}

}  // namespace jcqrc
