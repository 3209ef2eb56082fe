// jcqrc: run reservoir experiments described by JSON manifests.
#include "commands.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Quantum reservoir computing with Jaynes-Cummings reservoirs"};
  app.set_version_flag("--version", jcqrc::library_version());
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
  };
  const Entry entries[] = {
      {"task", "train and score one experiment (STM, PC or Mackey-Glass)"},
      {"sweep", "evaluate a parameter grid"},
      {"wigner", "Wigner map of the boson state at a snapshot step"},
      {"convergence", "STM capacity over n_levels x kappa"},
      {"fading-memory", "feature divergence after a single altered input"},
  };

  std::string config;
  jcqrc::cli::Overrides overrides;
  std::string out;
  int workers = 0;
  std::uint64_t seed = 0;

  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("-c,--config", config, "manifest (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out, "output directory (overrides output.dir)");
    sub->add_option("-w,--workers", workers, "worker threads, 0 = all cores (overrides output.workers)");
    sub->add_option("--seed", seed, "input sequence seed (overrides reservoir.seed)");
    sub->add_option("--emit", overrides.emit, "outputs to write: csv, json, svg (overrides output.emit)")
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->delimiter(',');
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--out") > 0) overrides.out = out;
  if (chosen->count("--workers") > 0) overrides.workers = workers;
  if (chosen->count("--seed") > 0) overrides.seed = seed;
  return jcqrc::cli::run_command(chosen->get_name(), config, overrides);
}
