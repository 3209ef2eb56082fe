#include "jcqrc/dynamics.hpp"

#include "jcqrc/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <string>

namespace jcqrc {

// ---------------------------------------------------------------- state

DensityMatrix::DensityMatrix(SpaceLayout layout, ComplexMatrix entries)
    : layout_(layout), entries_(std::move(entries)) {
  if (entries_.rows() != layout_.joint_dim() || entries_.cols() != layout_.joint_dim()) {
    throw DimensionError("DensityMatrix: entries are " + std::to_string(entries_.rows()) + "x" +
                         std::to_string(entries_.cols()) + " but layout needs " +
                         std::to_string(layout_.joint_dim()));
  }
}

double DensityMatrix::trace_defect() const { return std::abs(entries_.trace() - Complex(1.0, 0.0)); }

double DensityMatrix::hermiticity_defect() const { return jcqrc::hermiticity_defect(entries_); }

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::top_level_population(int count) const {
  const Index n = layout_.boson_dim;
  count = std::clamp<int>(count, 0, static_cast<int>(n));
  double total = 0.0;
  for (Index q = 0; q < SpaceLayout::qubit_dim; ++q) {
    for (Index level = n - count; level < n; ++level) {
      const Index i = layout_.index(q, level);
      total += entries_(i, i).real();
    }
  }
  return total;
}

std::string_view to_string(PropagationMethod method) {
  switch (method) {
    case PropagationMethod::ExpAction: return "exp_action";
    case PropagationMethod::SuperopExp: return "superop_exp";
    case PropagationMethod::RK4: return "rk4";
  }
  return "unknown";
}

PropagationMethod parse_propagation_method(std::string_view name) {
  if (name == "exp_action") return PropagationMethod::ExpAction;
  if (name == "superop_exp") return PropagationMethod::SuperopExp;
  if (name == "rk4") return PropagationMethod::RK4;
  throw ConfigError("unknown propagation method '" + std::string(name) +
                    "' (expected exp_action, superop_exp or rk4)");
}

// ---------------------------------------------------------------- generator

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                           const ComplexMatrix& jump, double kappa) {
  const Index d = rho.rows();
  if (rho.cols() != d || h.rows() != d || h.cols() != d || jump.rows() != d || jump.cols() != d) {
    throw DimensionError("lindblad_rhs: state, Hamiltonian and jump operator must share one dimension");
  }
  const Complex i_unit(0.0, 1.0);
  const ComplexMatrix jump_number = jump.adjoint() * jump;
  return -i_unit * (h * rho - rho * h) +
         kappa * (jump * rho * jump.adjoint() - 0.5 * (jump_number * rho + rho * jump_number));
}

ComplexMatrix liouvillian(const ComplexMatrix& h, const ComplexMatrix& jump, double kappa) {
  const Index d = h.rows();
  if (h.cols() != d || jump.rows() != d || jump.cols() != d) {
    throw DimensionError("liouvillian: Hamiltonian and jump operator must share one dimension");
  }
  // vec(A X B) = (B^T kron A) vec(X)
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix jump_number = jump.adjoint() * jump;
  const Complex i_unit(0.0, 1.0);
  return -i_unit * (kron(id, h) - kron(h.transpose(), id)) +
         kappa * (kron(jump.conjugate(), jump) - 0.5 * kron(id, jump_number) -
                  0.5 * kron(jump_number.transpose(), id));
}

DensityMatrix initial_state(const ReservoirConfig& config) {
  const SpaceLayout layout = config.layout();
  ComplexMatrix rho = ComplexMatrix::Zero(layout.joint_dim(), layout.joint_dim());
  // |g,0> for the boson; |g,g> for two qubits (ground of qubit 2 sits at index kGround).
  const Index level = is_bosonic(config.model) ? 0 : kGround;
  const Index i = layout.index(kGround, level);
  rho(i, i) = 1.0;
  return DensityMatrix(layout, std::move(rho));
}

// ---------------------------------------------------------------- propagator

Propagator::Propagator(const ReservoirConfig& config, PropagationOptions options)
    : config_(config), options_(options), layout_(config.layout()) {
  config_.validate();
  if (options_.rk4_substeps_per_node < 1) throw ConfigError("rk4 substeps must be >= 1");
  if (!(options_.action_substep_norm > 0.0)) throw ConfigError("action_substep_norm must be > 0");
  parts_ = hamiltonian_parts(config_);
  jump_ = lindblad_jump(config_);
  jump_number_ = jump_.adjoint() * jump_;
  jump_norm_sq_ = jump_number_.cwiseAbs().rowwise().sum().maxCoeff();

  const Index d = layout_.joint_dim();
  jump_source_.assign(static_cast<std::size_t>(d), -1);
  jump_weight_.assign(static_cast<std::size_t>(d), Complex(0.0, 0.0));
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      if (jump_(r, c) == Complex(0.0, 0.0)) continue;
      if (jump_source_[static_cast<std::size_t>(r)] >= 0) {
        throw ConfigError("loss operator must have at most one entry per row");
      }
      if (jump_(r, c).imag() != 0.0) throw ConfigError("loss operator entries must be real");
      jump_source_[static_cast<std::size_t>(r)] = c;
      jump_weight_[static_cast<std::size_t>(r)] = jump_(r, c);
    }
  }
}

void Propagator::prepare(double beta) {
  if (prepared_ && std::bit_cast<std::uint64_t>(terms_.beta) == std::bit_cast<std::uint64_t>(beta)) {
    return;
  }
  const ComplexMatrix h = parts_.base + beta * parts_.drive;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  // [H, rho] is unchanged by a multiple of the identity; centring the spectrum
  // minimises the generator norm.
  const double shift = 0.5 * (lo + hi);
  const Complex i_unit(0.0, 1.0);
  const ComplexMatrix h_eff = h - shift * ComplexMatrix::Identity(h.rows(), h.cols()) -
                              (0.5 * config_.kappa) * i_unit * jump_number_;
  terms_.beta = beta;
  terms_.col_start.assign(1, 0);
  terms_.row.clear();
  terms_.value.clear();
  for (Index k = 0; k < h_eff.cols(); ++k) {
    for (Index i = 0; i < h_eff.rows(); ++i) {
      if (h_eff(i, k) == Complex(0.0, 0.0)) continue;
      terms_.row.push_back(i);
      terms_.value.push_back(h_eff(i, k));
    }
    terms_.col_start.push_back(static_cast<Index>(terms_.row.size()));
  }
  // ||[H, .]|| = spectral width; dissipator bounded by kappa (||L||^2 + ||L^dag L||).
  terms_.norm_bound = (hi - lo) + 2.0 * config_.kappa * jump_norm_sq_;
  prepared_ = true;
}

void Propagator::apply(const ComplexMatrix& x, ComplexMatrix& out) const {
  // On Hermitian x, rho H_eff^dag = (H_eff rho)^dag, so one product suffices.
  // Only the upper triangle is computed and mirrored, which keeps every
  // iterate exactly Hermitian. Complex products are spelled out: std::complex
  // multiplication carries NaN recovery that dominates at this size.
  const Index d = x.rows();
  product_.setZero(d, d);
  const Index* start = terms_.col_start.data();
  const Index* rows = terms_.row.data();
  const Complex* values = terms_.value.data();
  for (Index c = 0; c < d; ++c) {
    Complex* y = product_.data() + c * d;
    const Complex* xc = x.data() + c * d;
    for (Index k = 0; k < d; ++k) {
      const double xr = xc[k].real();
      const double xi = xc[k].imag();
      if (xr == 0.0 && xi == 0.0) continue;
      for (Index e = start[k]; e < start[k + 1]; ++e) {
        const double vr = values[e].real();
        const double vi = values[e].imag();
        y[rows[e]] += Complex(vr * xr - vi * xi, vr * xi + vi * xr);
      }
    }
  }
  out.resize(d, d);
  const double kappa = config_.kappa;
  for (Index c = 0; c < d; ++c) {
    const Index sc = jump_source_[static_cast<std::size_t>(c)];
    const double wc = sc >= 0 ? kappa * jump_weight_[static_cast<std::size_t>(c)].real() : 0.0;
    for (Index r = 0; r <= c; ++r) {
      // -i Y(r, c) + i conj(Y(c, r))
      const Complex y_rc = product_(r, c);
      const Complex y_cr = product_(c, r);
      double re = y_rc.imag() + y_cr.imag();
      double im = y_cr.real() - y_rc.real();
      const Index sr = jump_source_[static_cast<std::size_t>(r)];
      if (sr >= 0 && sc >= 0) {
        const double w = jump_weight_[static_cast<std::size_t>(r)].real() * wc;
        re += w * x(sr, sc).real();
        im += w * x(sr, sc).imag();
      }
      if (r == c) {
        out(r, c) = Complex(re, 0.0);
      } else {
        out(r, c) = Complex(re, im);
        out(c, r) = Complex(re, -im);
      }
    }
  }
}

void Propagator::step_rk4(ComplexMatrix& rho, double t) const {
  const int n = options_.rk4_substeps_per_node;
  const double h = t / n;
  ComplexMatrix k1(rho.rows(), rho.cols());
  ComplexMatrix k2(rho.rows(), rho.cols());
  ComplexMatrix k3(rho.rows(), rho.cols());
  ComplexMatrix k4(rho.rows(), rho.cols());
  ComplexMatrix tmp(rho.rows(), rho.cols());
  for (int s = 0; s < n; ++s) {
    apply(rho, k1);
    tmp = rho + (0.5 * h) * k1;
    apply(tmp, k2);
    tmp = rho + (0.5 * h) * k2;
    apply(tmp, k3);
    tmp = rho + h * k3;
    apply(tmp, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

void Propagator::step_superop(ComplexMatrix& rho, double beta, double t) {
  const auto key = std::make_pair(std::bit_cast<std::uint64_t>(beta), std::bit_cast<std::uint64_t>(t));
  auto it = superop_cache_.find(key);
  if (it == superop_cache_.end()) {
    if (superop_cache_.size() >= options_.superop_cache_size) superop_cache_.clear();
    const ComplexMatrix h = parts_.base + beta * parts_.drive;
    const ComplexMatrix generator = liouvillian(h, jump_, config_.kappa);
    it = superop_cache_.emplace(key, expm(generator * t)).first;
  }
  const Index d = rho.rows();
  Eigen::Map<const Eigen::VectorXcd> vec_in(rho.data(), d * d);
  const Eigen::VectorXcd vec_out = it->second * vec_in;
  rho = Eigen::Map<const ComplexMatrix>(vec_out.data(), d, d);
}

void Propagator::step(ComplexMatrix& rho, double beta, double t) {
  if (options_.method != PropagationMethod::SuperopExp) rho = (0.5 * (rho + rho.adjoint())).eval();
  switch (options_.method) {
    case PropagationMethod::ExpAction: {
      prepare(beta);
      ComplexMatrix scratch(rho.rows(), rho.cols());
      auto apply_fn = [this, &scratch](const ComplexMatrix& x) {
        apply(x, scratch);
        return scratch;
      };
      rho = exp_action(apply_fn, terms_.norm_bound, t, rho, options_.action_tolerance,
                       options_.action_substep_norm, 120,
                       &stats_);
      break;
    }
    case PropagationMethod::RK4:
      prepare(beta);
      step_rk4(rho, t);
      break;
    case PropagationMethod::SuperopExp:
      step_superop(rho, beta, t);
      break;
  }
  check_finite(rho, beta);
}

void Propagator::check_finite(const ComplexMatrix& rho, double beta) const {
  if (rho.allFinite()) return;
  std::ostringstream msg;
  msg << "non-finite density matrix after propagation (model=" << to_string(config_.model)
      << ", beta=" << beta << ", delta_b=" << config_.delta_b << ", delta=" << config_.delta
      << ", chi=" << config_.chi << ", alpha=" << config_.alpha << ", kappa=" << config_.kappa
      << ", dt=" << config_.dt << ", V=" << config_.virtual_nodes
      << ", n_levels=" << config_.n_levels << ", method=" << to_string(options_.method) << ")";
  throw PropagationError(msg.str());
}

void Propagator::propagate_interval(ComplexMatrix& rho, double beta, std::vector<ComplexMatrix>& nodes) {
  if (!std::isfinite(beta)) throw PropagationError("drive amplitude beta is not finite");
  const int v = config_.virtual_nodes;
  const double node_time = config_.dt / v;
  nodes.resize(static_cast<std::size_t>(v));
  for (int k = 0; k < v; ++k) {
    step(rho, beta, node_time);
    nodes[static_cast<std::size_t>(k)] = rho;
  }
}

std::vector<DensityMatrix> Propagator::propagate_interval(const DensityMatrix& rho, double beta) {
  if (!(rho.layout() == layout_)) throw DimensionError("propagate_interval: state layout mismatch");
  ComplexMatrix state = rho.matrix();
  std::vector<ComplexMatrix> nodes;
  propagate_interval(state, beta, nodes);
  std::vector<DensityMatrix> out;
  out.reserve(nodes.size());
  for (auto& node : nodes) out.emplace_back(layout_, std::move(node));
  return out;
}

DensityMatrix Propagator::evolve(const DensityMatrix& rho, double beta, double t) {
  if (!(rho.layout() == layout_)) throw DimensionError("evolve: state layout mismatch");
  ComplexMatrix state = rho.matrix();
  if (t != 0.0) step(state, beta, t);
  return DensityMatrix(layout_, std::move(state));
}

std::vector<DensityMatrix> propagate_interval(const DensityMatrix& rho, const ReservoirConfig& config,
                                              double beta, PropagationOptions options) {
  Propagator propagator(config, options);
  return propagator.propagate_interval(rho, beta);
}

}  // namespace jcqrc
