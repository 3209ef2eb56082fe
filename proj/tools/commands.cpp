#include "commands.hpp"

#include "jcqrc/error.hpp"
#include "jcqrc/report.hpp"
#include "jcqrc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace jcqrc::cli {

using nlohmann::json;

void Outputs::add(std::string name, std::string content) {
  for (const auto& f : files_) {
    if (f.first == name) throw std::logic_error("duplicate output " + name);
  }
  files_.emplace_back(std::move(name), std::move(content));
}

std::vector<std::filesystem::path> Outputs::commit(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files_) {
    write_file(dir / name, content);
    written.push_back(dir / name);
  }
  return written;
}

namespace {

const std::set<std::string> kCommands{"task", "sweep", "wigner", "convergence", "fading-memory"};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <class Writer, class... Args>
std::string csv(Writer writer, const Args&... args) {
  std::ostringstream out;
  writer(args..., out);
  return out.str();
}

json header(const RunManifest& manifest) {
  return {{"schema", kManifestSchema}, {"version", library_version()}, {"command", manifest.command}};
}

void echo_manifest(Outputs& outputs, const RunManifest& manifest) {
  outputs.add("manifest.json", dump(to_json(manifest)));
}

std::string trace_stem(const PredictionTrace& trace) {
  if (trace.name == "rmse_autonomous") return "predictions_autonomous";
  if (trace.name == "rmse_forecast") return "predictions_k" + std::to_string(trace.delay);
  return "predictions_tau" + std::to_string(trace.delay);
}

std::string trace_svg(const PredictionTrace& trace) {
  svg::Series target{"target", {}, trace.target};
  svg::Series predicted{"predicted", {}, trace.predicted};
  for (long s : trace.steps) {
    target.x.push_back(static_cast<double>(s));
    predicted.x.push_back(static_cast<double>(s));
  }
  return svg::line_plot({target, predicted}, {trace_stem(trace), "step", "value", false});
}

void report_warnings(const Warnings& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

json sweep_json(const SweepTable& table) {
  json rows = json::array();
  json failed = json::array();
  for (const auto& row : table.rows) {
    json r = {{"index", row.index}, {"ok", row.ok}};
    json values = json::object();
    for (std::size_t a = 0; a < table.axes.size(); ++a) values[table.axes[a]] = row.values[a];
    r["values"] = values;
    json cells = json::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const double v = row.cells[c];
      cells[table.columns[c]] = std::isfinite(v) ? json(v) : json(nullptr);
    }
    r["cells"] = cells;
    if (!row.warnings.empty()) r["warnings"] = row.warnings;
    if (!row.ok) {
      r["error"] = row.error;
      failed.push_back({{"index", row.index}, {"values", values}, {"error", row.error}});
    }
    rows.push_back(std::move(r));
  }
  return {{"axes", table.axes}, {"columns", table.columns}, {"points", table.rows.size()},
          {"failed", failed}, {"rows", rows}};
}

bool is_metric_column(const std::string& name) {
  const auto ends_with = [&](std::string_view suffix) {
    return name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return (name.rfind("capacity", 0) == 0 || name.rfind("rmse", 0) == 0) &&
         (ends_with("_test") || ends_with("_test_mean"));
}

// One line per metric column; x is the last axis, or the grid index when there are several axes.
std::string sweep_svg(const SweepTable& table, const std::string& title) {
  const bool single = table.axes.size() == 1;
  std::vector<svg::Series> series;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (!is_metric_column(table.columns[c])) continue;
    svg::Series s{table.columns[c], {}, {}};
    for (const auto& row : table.rows) {
      if (!row.ok || !std::isfinite(row.cells[c])) continue;
      s.x.push_back(single ? row.values.front() : static_cast<double>(row.index));
      s.y.push_back(row.cells[c]);
    }
    if (!s.x.empty()) series.push_back(std::move(s));
  }
  return svg::line_plot(series, {title, single ? table.axes.front() : "grid index", "metric", false});
}

void add_sweep_outputs(Outputs& outputs, const RunManifest& manifest, const SweepTable& table,
                       const std::string& stem) {
  if (manifest.emit.csv) outputs.add(stem + ".csv", csv(write_sweep_csv, table));
  if (manifest.emit.json) {
    json j = header(manifest);
    j["manifest"] = to_json(manifest);
    j["table"] = sweep_json(table);
    outputs.add(stem + ".json", dump(j));
  }
  if (manifest.emit.svg) outputs.add(stem + ".svg", sweep_svg(table, stem));
}

}  // namespace

RunManifest resolve(const std::filesystem::path& config, const std::string& command, const Overrides& overrides) {
  if (!kCommands.count(command)) throw ConfigError("unknown command '" + command + "'");
  RunManifest m = load_manifest(config);
  if (!m.command.empty() && m.command != command)
    throw ConfigError("manifest is for '" + m.command + "', not '" + command + "'");
  m.command = command;
  if (overrides.out) m.output_dir = *overrides.out;
  if (overrides.workers) {
    if (*overrides.workers < 0) throw ConfigError("--workers must be >= 0");
    m.workers = *overrides.workers;
  }
  if (overrides.seed) m.experiment.config.seed = *overrides.seed;
  if (!overrides.emit.empty()) {
    m.emit = {false, false, false};
    for (const auto& e : overrides.emit) {
      if (e == "csv") m.emit.csv = true;
      else if (e == "json") m.emit.json = true;
      else if (e == "svg") m.emit.svg = true;
      else throw ConfigError("--emit accepts csv, json or svg, got '" + e + "'");
    }
  }
  m.experiment.validate();
  return m;
}

Outputs cmd_task(const RunManifest& manifest) {
  const ExperimentResult result = run_experiment(manifest.experiment);
  report_warnings(result.warnings);
  Outputs outputs;
  echo_manifest(outputs, manifest);
  if (manifest.emit.json) outputs.add("metrics.json", dump(to_json(result)));
  if (manifest.emit.csv) {
    outputs.add("metrics.csv", csv(write_metrics_csv, result));
    for (const auto& trace : result.traces) outputs.add(trace_stem(trace) + ".csv", csv(write_predictions_csv, trace));
  }
  if (manifest.emit.svg) {
    for (const auto& trace : result.traces) outputs.add(trace_stem(trace) + ".svg", trace_svg(trace));
  }
  for (const auto& m : result.metrics) {
    std::fprintf(stderr, "%s[%d] test=%s train=%s\n", m.name.c_str(), m.delay,
                 m.test ? format_number(*m.test).c_str() : "-", m.train ? format_number(*m.train).c_str() : "-");
  }
  return outputs;
}

Outputs cmd_sweep(const RunManifest& manifest) {
  const SweepSpec sweep = manifest.sweep();
  sweep.validate();
  std::fprintf(stderr, "sweep: %zu points, %d workers\n", sweep.point_count(), manifest.workers);
  const SweepTable table = run_sweep(sweep, manifest.workers);
  std::size_t failed = 0;
  for (const auto& row : table.rows) {
    if (!row.ok) {
      ++failed;
      std::cerr << "point " << row.index << " failed: " << row.error << "\n";
    }
  }
  if (failed > 0) std::fprintf(stderr, "sweep: %zu of %zu points failed\n", failed, table.rows.size());
  Outputs outputs;
  echo_manifest(outputs, manifest);
  add_sweep_outputs(outputs, manifest, table, "sweep");
  return outputs;
}

Outputs cmd_wigner(const RunManifest& manifest) {
  const ExperimentSpec& spec = manifest.experiment;
  if (!is_bosonic(spec.config.model)) throw ConfigError("wigner needs a bosonic model (JC or DJC)");
  const WignerGrid& grid = manifest.wigner.grid;
  grid.validate();
  const ComplexMatrix rho_b = reservoir_snapshot(spec, manifest.wigner.snapshot_step);
  const RealMatrix w = wigner(rho_b, grid);

  double integral = 0.0;
  double negative_volume = 0.0;
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) {
      integral += w(i, j) * grid.cell_area();
      if (w(i, j) < 0.0) negative_volume -= w(i, j) * grid.cell_area();
    }
  }
  Outputs outputs;
  echo_manifest(outputs, manifest);
  if (manifest.emit.csv) outputs.add("wigner.csv", csv(write_wigner_csv, w, grid));
  if (manifest.emit.json) {
    json j = header(manifest);
    j["snapshot_step"] = manifest.wigner.snapshot_step;
    j["min"] = w.minCoeff();
    j["max"] = w.maxCoeff();
    j["at_origin"] = wigner_at(rho_b, 0.0, 0.0);
    j["integral"] = integral;
    j["negative_volume"] = negative_volume;
    j["spec"] = to_json(spec);
    outputs.add("wigner.json", dump(j));
  }
  if (manifest.emit.svg) {
    outputs.add("wigner.svg", svg::heatmap(w, grid.x_min, grid.x_max, grid.p_min, grid.p_max,
                                           {"W(x, p) at step " + std::to_string(manifest.wigner.snapshot_step),
                                            "x", "p", false}));
  }
  std::fprintf(stderr, "wigner: min %s max %s integral %s\n", format_number(w.minCoeff()).c_str(),
               format_number(w.maxCoeff()).c_str(), format_number(integral).c_str());
  return outputs;
}

Outputs cmd_convergence(const RunManifest& manifest) {
  const ConvergenceRequest& req = manifest.convergence;
  const SweepTable table = convergence_study(manifest.experiment, req.levels, req.kappas, manifest.workers);
  Outputs outputs;
  echo_manifest(outputs, manifest);
  if (manifest.emit.csv) outputs.add("convergence.csv", csv(write_sweep_csv, table));
  if (manifest.emit.json) {
    json j = header(manifest);
    j["manifest"] = to_json(manifest);
    j["table"] = sweep_json(table);
    outputs.add("convergence.json", dump(j));
  }
  if (manifest.emit.svg) {
    // Capacity against n_levels, one line per kappa and delay.
    std::map<std::string, svg::Series> lines;
    const auto level_axis = std::find(table.axes.begin(), table.axes.end(), "n_levels") - table.axes.begin();
    const auto kappa_axis = std::find(table.axes.begin(), table.axes.end(), "kappa") - table.axes.begin();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (!is_metric_column(table.columns[c])) continue;
      for (const auto& row : table.rows) {
        if (!row.ok || !std::isfinite(row.cells[c])) continue;
        const std::string label =
            table.columns[c] + " kappa=" + format_number(row.values[static_cast<std::size_t>(kappa_axis)]);
        auto& s = lines[label];
        s.label = label;
        s.x.push_back(row.values[static_cast<std::size_t>(level_axis)]);
        s.y.push_back(row.cells[c]);
      }
    }
    std::vector<svg::Series> series;
    for (auto& [label, s] : lines) series.push_back(std::move(s));
    outputs.add("convergence.svg", svg::line_plot(series, {"truncation study", "n_levels", "capacity", false}));
  }
  return outputs;
}

Outputs cmd_fading_memory(const RunManifest& manifest) {
  const FadingRequest& req = manifest.fading;
  const FadingTrace trace =
      fading_memory_probe(manifest.experiment, req.flip_step, req.altered_value, req.horizon, req.original_value);
  Outputs outputs;
  echo_manifest(outputs, manifest);
  if (manifest.emit.csv) outputs.add("fading.csv", csv(write_fading_csv, trace));
  if (manifest.emit.json) {
    json j = header(manifest);
    j["flip_step"] = req.flip_step;
    j["altered_value"] = req.altered_value;
    j["original_value"] = req.original_value ? json(*req.original_value) : json(nullptr);
    j["steps"] = trace.steps;
    j["distance"] = trace.distance;
    j["spec"] = to_json(manifest.experiment);
    outputs.add("fading.json", dump(j));
  }
  if (manifest.emit.svg) {
    svg::Series s{"distance", {}, {}};
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      // Zero distances have no place on a log axis.
      if (!(trace.distance[i] > 0.0)) continue;
      s.x.push_back(static_cast<double>(trace.steps[i]));
      s.y.push_back(trace.distance[i]);
    }
    outputs.add("fading.svg", svg::line_plot({s}, {"feature distance after the flipped input", "step", "distance", true}));
  }
  return outputs;
}

int run_command(const std::string& command, const std::filesystem::path& config, const Overrides& overrides) {
  RunManifest manifest;
  try {
    manifest = resolve(config, command, overrides);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  Outputs outputs;
  try {
    if (command == "task") outputs = cmd_task(manifest);
    else if (command == "sweep") outputs = cmd_sweep(manifest);
    else if (command == "wigner") outputs = cmd_wigner(manifest);
    else if (command == "convergence") outputs = cmd_convergence(manifest);
    else outputs = cmd_fading_memory(manifest);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    for (const auto& path : outputs.commit(manifest.output_dir)) std::cout << path.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error writing outputs: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace jcqrc::cli
