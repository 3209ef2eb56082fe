// commands.hpp: subcommand bodies for the jcqrc CLI.
#pragma once

#include "jcqrc/manifest.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jcqrc::cli {

// Files produced by a command. Nothing touches the disk until commit(), so a
// failing run leaves no partial outputs behind.
class Outputs {
 public:
  void add(std::string name, std::string content);
  // Creates the directory and writes every file; returns the written paths.
  std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) const;
  bool empty() const { return files_.empty(); }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> emit;
};

// Loads the manifest, checks it against the subcommand and applies flag overrides.
RunManifest resolve(const std::filesystem::path& config, const std::string& command, const Overrides& overrides);

Outputs cmd_task(const RunManifest& manifest);
Outputs cmd_sweep(const RunManifest& manifest);
Outputs cmd_wigner(const RunManifest& manifest);
Outputs cmd_convergence(const RunManifest& manifest);
Outputs cmd_fading_memory(const RunManifest& manifest);

// Runs `command` and writes its outputs. Returns the process exit status.
int run_command(const std::string& command, const std::filesystem::path& config, const Overrides& overrides);

}  // namespace jcqrc::cli
