// manifest.hpp: strict JSON run manifests and result serialisation.
#pragma once

#include "jcqrc/pipeline.hpp"
#include "jcqrc/readout.hpp"
#include "jcqrc/sweep.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace jcqrc {

inline constexpr int kManifestSchema = 1;

struct WignerRequest {
  long snapshot_step = 0;
  WignerGrid grid;
};

struct FadingRequest {
  long flip_step = 1000;
  double altered_value = 0.2;
  std::optional<double> original_value;  // reference input at flip_step; unset keeps the sequence value
  int horizon = 12;
};

struct ConvergenceRequest {
  std::vector<int> levels{10, 15, 20};
  std::vector<double> kappas{0.1, 0.01};
};

struct EmitFlags {
  bool csv = true;
  bool json = true;
  bool svg = false;
};

struct RunManifest {
  std::string command;  // task, sweep, wigner, convergence, fading-memory; empty = decided by the CLI
  ExperimentSpec experiment;
  std::vector<SweepAxis> axes;
  Aggregation aggregation = Aggregation::PerPoint;
  int segments = 10;
  WignerRequest wigner;
  FadingRequest fading;
  ConvergenceRequest convergence;
  std::filesystem::path output_dir = "out";
  EmitFlags emit;
  int workers = 1;

  SweepSpec sweep() const;
};

// Unknown keys and wrong value types throw ConfigError naming the key path.
RunManifest manifest_from_json(const nlohmann::json& j);
RunManifest load_manifest(const std::filesystem::path& path);
// Fully resolved: every default written out, so the echo reproduces the run.
nlohmann::json to_json(const RunManifest& manifest);

nlohmann::json to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExperimentResult& result);
nlohmann::json to_json(const RunDiagnostics& diagnostics);

}  // namespace jcqrc
