#include "jcqrc/models.hpp"

#include "jcqrc/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace jcqrc {

std::string_view to_string(Model model) {
  switch (model) {
    case Model::JC: return "JC";
    case Model::DJC: return "DJC";
    case Model::QQ_JC: return "QQ_JC";
    case Model::QQ_DJC: return "QQ_DJC";
  }
  throw ConfigError("unknown model");
}

Model parse_model(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (upper == "JC") return Model::JC;
  if (upper == "DJC") return Model::DJC;
  if (upper == "QQ_JC") return Model::QQ_JC;
  if (upper == "QQ_DJC") return Model::QQ_DJC;
  throw ConfigError("unknown model '" + std::string(name) + "' (expected JC, DJC, QQ_JC or QQ_DJC)");
}

bool is_bosonic(Model model) { return model == Model::JC || model == Model::DJC; }

void ReservoirConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(delta_b) || !finite(delta) || !finite(chi) || !finite(alpha)) {
    throw ConfigError("reservoir parameters must be finite");
  }
  if (!(kappa > 0.0) || !finite(kappa)) throw ConfigError("kappa must be > 0");
  if (!(dt > 0.0) || !finite(dt)) throw ConfigError("dt must be > 0");
  if (alpha < 0.0) throw ConfigError("alpha must be >= 0");
  if (virtual_nodes < 1) throw ConfigError("virtual_nodes must be >= 1");
  if (is_bosonic(model) && n_levels < 2) throw ConfigError("n_levels must be >= 2");
  if (!(ridge_lambda >= 0.0) || !finite(ridge_lambda)) throw ConfigError("ridge_lambda must be >= 0");
}

SpaceLayout ReservoirConfig::layout() const {
  return is_bosonic(model) ? make_layout(n_levels) : make_layout(2);
}

HamiltonianParts hamiltonian_parts(const ReservoirConfig& config) {
  config.validate();
  const SpaceLayout layout = config.layout();
  const QubitOps q = build_qubit_ops();
  const Complex i_unit(0.0, 1.0);
  HamiltonianParts parts;

  switch (config.model) {
    case Model::JC: {
      const BosonOps b = build_boson_ops(layout);
      parts.base = (config.delta_b + config.delta) * on_qubit(q.sz, layout) +
                   config.delta_b * on_boson(b.n, layout) +
                   config.chi * (kron(q.sp, b.c) + kron(q.sm, b.c_dag)) +
                   config.alpha * on_qubit(q.sx, layout);
      parts.drive = i_unit * on_boson(b.c - b.c_dag, layout);
      break;
    }
    case Model::DJC: {
      const BosonOps b = build_boson_ops(layout);
      parts.base = config.chi * kron(q.sz, b.n) + config.alpha * on_qubit(q.sx, layout);
      parts.drive = i_unit * on_boson(b.c - b.c_dag, layout);
      break;
    }
    case Model::QQ_JC: {
      const double delta_a = config.delta + config.delta_b;
      parts.base = delta_a * on_qubit(q.sz, layout) + 0.5 * config.delta_b * on_boson(q.sz, layout) +
                   config.chi * (kron(q.sp, q.sm) + kron(q.sm, q.sp)) +
                   config.alpha * on_qubit(q.sx, layout);
      parts.drive = on_boson(q.sx, layout);
      break;
    }
    case Model::QQ_DJC: {
      const ComplexMatrix excited2 = 0.5 * (q.sz + identity(2));
      parts.base = config.chi * kron(q.sz, excited2) + config.alpha * on_qubit(q.sx, layout);
      parts.drive = on_boson(q.sx, layout);
      break;
    }
  }
  return parts;
}

ComplexMatrix hamiltonian(const ReservoirConfig& config, double beta) {
  if (!std::isfinite(beta)) throw ConfigError("drive amplitude beta must be finite");
  HamiltonianParts parts = hamiltonian_parts(config);
  return parts.base + beta * parts.drive;
}

ComplexMatrix lindblad_jump(const ReservoirConfig& config) {
  config.validate();
  const SpaceLayout layout = config.layout();
  if (is_bosonic(config.model)) return on_boson(build_boson_ops(layout).c, layout);
  return on_boson(build_qubit_ops().sm, layout);
}

}  // namespace jcqrc
