// models.hpp: rotating-frame Hamiltonians of the four reservoir models.
#pragma once

#include "jcqrc/hilbert.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace jcqrc {

enum class Model {
  JC,      // qubit + boson, Jaynes-Cummings exchange
  DJC,     // qubit + boson, dispersive coupling at resonance
  QQ_JC,   // two-qubit analogue of JC
  QQ_DJC,  // two-qubit analogue of DJC
};

std::string_view to_string(Model model);
// Accepts "JC", "DJC", "QQ_JC", "QQ_DJC" (case-insensitive); throws ConfigError otherwise.
Model parse_model(std::string_view name);
bool is_bosonic(Model model);

struct ReservoirConfig {
  Model model = Model::JC;
  double delta_b = 1.0;  // cavity detuning
  double delta = 0.0;    // qubit detuning relative to delta_b (JC, QQ_JC)
  double chi = 1.0;      // exchange coupling (JC) or dispersive shift (DJC)
  double alpha = 0.0;    // qubit drive amplitude
  double kappa = 0.1;    // photon loss rate
  double dt = 10.0;      // duration of one input interval
  int virtual_nodes = 1;
  int n_levels = 15;  // boson truncation; ignored by the two-qubit models
  double ridge_lambda = 0.05;
  std::uint64_t seed = 1;

  // Throws ConfigError naming the first offending field.
  void validate() const;
  SpaceLayout layout() const;
};

// H(beta) = base + beta * drive; both parts Hermitian.
struct HamiltonianParts {
  ComplexMatrix base;
  ComplexMatrix drive;
};

HamiltonianParts hamiltonian_parts(const ReservoirConfig& config);

// JC:     (delta_b + delta) sz + delta_b N + chi (c sp + c^dag sm) + i beta (c - c^dag) + alpha sx
// DJC:    chi N sz + i beta (c - c^dag) + alpha sx
// QQ_JC:  (delta + delta_b) sz1 + (delta_b / 2) sz2 + chi (sp1 sm2 + sm1 sp2) + alpha sx1 + beta sx2
// QQ_DJC: chi sz1 (sz2 + 1) / 2 + alpha sx1 + beta sx2
ComplexMatrix hamiltonian(const ReservoirConfig& config, double beta);

// Unscaled loss operator: c on the joint space for bosonic models, sm on the
// second qubit for the two-qubit models. The master equation uses sqrt(kappa) times this.
ComplexMatrix lindblad_jump(const ReservoirConfig& config);

}  // namespace jcqrc
