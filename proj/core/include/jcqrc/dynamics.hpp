// dynamics.hpp: Lindblad propagation of the reservoir state over one input interval.
#pragma once

#include "jcqrc/expm.hpp"
#include "jcqrc/hilbert.hpp"
#include "jcqrc/models.hpp"


#include <cstdint>
#include <string_view>
#include <map>
#include <utility>
#include <vector>

namespace jcqrc {

class DensityMatrix {
 public:
  DensityMatrix(SpaceLayout layout, ComplexMatrix entries);

  const SpaceLayout& layout() const { return layout_; }
  const ComplexMatrix& matrix() const { return entries_; }
  ComplexMatrix& matrix() { return entries_; }

  double trace_defect() const;  // |tr(rho) - 1|
  double hermiticity_defect() const;
  double min_eigenvalue() const;
  ComplexMatrix boson_reduced() const { return partial_trace_qubit(entries_, layout_); }
  // Population of the `count` highest levels of the second factor.
  double top_level_population(int count = 2) const;

 private:
  SpaceLayout layout_;
  ComplexMatrix entries_;
};

enum class PropagationMethod {
  ExpAction,   // Taylor action of the Liouvillian exponential on rho (default)
  SuperopExp,  // dense Pade exponential of the vectorized Liouvillian, cached per beta
  RK4,         // fixed-step classical Runge-Kutta on d rho / dt
};

std::string_view to_string(PropagationMethod method);
PropagationMethod parse_propagation_method(std::string_view name);

struct PropagationOptions {
  PropagationMethod method = PropagationMethod::ExpAction;
  int rk4_substeps_per_node = 4000;
  double action_tolerance = 1e-14;
  // ExpAction: bound on ||generator|| * substep length; larger means fewer, longer Taylor series.
  double action_substep_norm = 9.0;
  std::size_t superop_cache_size = 16;
};

// -i[H, rho] + kappa (L rho L^dag - {L^dag L, rho} / 2) for arbitrary square rho.
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h,
                           const ComplexMatrix& jump, double kappa);

// Matrix of the Lindblad generator acting on column-stacked vec(rho).
ComplexMatrix liouvillian(const ComplexMatrix& h, const ComplexMatrix& jump, double kappa);

// |g, 0><g, 0| for bosonic models, |g, g><g, g| for two-qubit models.
DensityMatrix initial_state(const ReservoirConfig& config);

// Propagates states for one fixed configuration. Holds per-config operators and
// (for SuperopExp) a propagator cache, so one instance should serve one trajectory.
class Propagator {
 public:
  explicit Propagator(const ReservoirConfig& config, PropagationOptions options = {});

  const ReservoirConfig& config() const { return config_; }
  const PropagationOptions& options() const { return options_; }

  // States at k * dt / V for k = 1..V with constant drive beta.
  std::vector<DensityMatrix> propagate_interval(const DensityMatrix& rho, double beta);
  // In-place variant: `nodes` is resized to V; `rho` becomes the final node.
  void propagate_interval(ComplexMatrix& rho, double beta, std::vector<ComplexMatrix>& nodes);

  // State after time t at constant beta.
  DensityMatrix evolve(const DensityMatrix& rho, double beta, double t);

  const ExpActionStats& action_stats() const { return stats_; }

 private:
  // H - shift - i kappa/2 L^dag L, compressed by column.
  struct DriveTerms {
    double beta = 0.0;
    std::vector<Index> col_start;
    std::vector<Index> row;
    std::vector<Complex> value;
    double norm_bound = 0.0;
  };

  void prepare(double beta);
  // Generator applied to Hermitian x; the result is exactly Hermitian.
  void apply(const ComplexMatrix& x, ComplexMatrix& out) const;
  void step(ComplexMatrix& rho, double beta, double t);
  void step_rk4(ComplexMatrix& rho, double t) const;
  void step_superop(ComplexMatrix& rho, double beta, double t);
  void check_finite(const ComplexMatrix& rho, double beta) const;

  ReservoirConfig config_;
  PropagationOptions options_;
  SpaceLayout layout_;
  HamiltonianParts parts_;
  ComplexMatrix jump_;
  std::vector<Index> jump_source_;  // row r of L has its single entry in column jump_source_[r]
  std::vector<Complex> jump_weight_;
  double jump_norm_sq_ = 0.0;
  ComplexMatrix jump_number_;  // L^dag L
  DriveTerms terms_;
  bool prepared_ = false;
  mutable ComplexMatrix product_;  // H_eff x, scratch for apply()
  std::map<std::pair<std::uint64_t, std::uint64_t>, ComplexMatrix> superop_cache_;
  ExpActionStats stats_;
};

std::vector<DensityMatrix> propagate_interval(const DensityMatrix& rho, const ReservoirConfig& config,
                                              double beta, PropagationOptions options = {});

}  // namespace jcqrc
