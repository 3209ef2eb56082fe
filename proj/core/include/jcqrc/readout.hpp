// readout.hpp: reservoir state -> real feature vector, plus Wigner diagnostics.
#pragma once

#include "jcqrc/dynamics.hpp"
#include "jcqrc/hilbert.hpp"
#include "jcqrc/models.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jcqrc {

enum class ObservableKind {
  Moments,    // 22 bosonic moments N^m (c^dag)^k, N^m c^k -> 40 reals
  RdmSmall,   // Re rho_b[i,j] (i <= j < 10), Im rho_b[i,j] (i < j < 6) -> 70 reals
  RdmFull,    // Re rho_b[i,j] (i <= j), Im rho_b[i,j] (i < j) -> n_levels^2 reals
  QubitPair,  // Re/Im of <sz2>, <sp2>, <sm2> -> 6 reals (two-qubit models)
};

std::string_view to_string(ObservableKind kind);
ObservableKind parse_observable_kind(std::string_view name);

struct ObservableSet {
  ObservableKind kind = ObservableKind::Moments;
  // RdmSmall only: keep the first 40 features of the documented order.
  bool truncate_rdm_small = false;
};

// Feature order (all sets evaluate on the reduced state of the second factor):
//   Moments:   Re<N>, Re<N^2>, Re<N^3>, Re<N^4>, then Re, Im of each of
//              c^dag, c^dag^2 .. c^dag^5, N c^dag, N c, N c^dag^2, N c^2, .. N c^dag^5, N c^5,
//              N^2 c^dag, N^2 c, N^2 c^dag^2
//   RdmSmall:  Re rho[i,j] for i <= j < 10 in row-major order, then Im rho[i,j] for i < j < 6
//   RdmFull:   Re rho[i,j] for i <= j, then Im rho[i,j] for i < j
//   QubitPair: Re<sz2>, Im<sz2>, Re<sp2>, Im<sp2>, Re<sm2>, Im<sm2>
class FeatureExtractor {
 public:
  // Throws ConfigError when the set does not fit the model (e.g. moments on two qubits).
  FeatureExtractor(const ObservableSet& set, Model model, const SpaceLayout& layout);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  void extract(const ComplexMatrix& rho, std::span<double> out) const;
  RealVector extract(const DensityMatrix& rho) const;

 private:
  ObservableSet set_;
  SpaceLayout layout_;
  std::vector<ComplexMatrix> operators_;  // second-factor operators (Moments, QubitPair)
  std::vector<bool> imaginary_;           // operator also contributes its imaginary part
  std::vector<std::string> names_;
};

RealVector extract_features(const DensityMatrix& rho, const ObservableSet& set, Model model);

// Names of the 22 moment operators in feature order.
const std::vector<std::string>& moment_operator_names();

struct WignerGrid {
  double x_min = -4.0;
  double x_max = 4.0;
  double p_min = -4.0;
  double p_max = 4.0;
  int resolution = 101;

  void validate() const;
  double x(int i) const;
  double p(int j) const;
  double cell_area() const;
};

// W(x, p) = (1/pi) tr[rho D(a) Parity D(a)^dag], a = (x + i p)/sqrt(2),
// normalised so that the integral over dx dp is 1.
double wigner_at(const ComplexMatrix& rho_b, double x, double p);
// Entry (i, j) holds W(grid.x(i), grid.p(j)). Throws NumericalError when
// |tr(rho_b) - 1| > 1e-6.
RealMatrix wigner(const ComplexMatrix& rho_b, const WignerGrid& grid = {});

// For each beta: start from the initial state, drive with constant beta for
// `settle_inputs` intervals and record the features of the final state.
// With `scale_to_unit`, each feature column is min-max mapped onto [-1, 1]
// (constant columns map to 0).
RealMatrix response_curve(const ReservoirConfig& config, std::span<const double> beta_grid,
                          int settle_inputs = 50, const ObservableSet& set = {},
                          bool scale_to_unit = false, PropagationOptions options = {});

}  // namespace jcqrc
