// learning.hpp: ridge readout and the two scoring metrics.
#pragma once

#include "jcqrc/error.hpp"
#include "jcqrc/hilbert.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jcqrc {

// Rows are input steps; columns are (virtual node k = 1..V) x (feature index).
using FeatureMatrix = RealMatrix;

enum class RidgeSolver {
  Auto,             // NormalEquations for lambda > 0, minimum-norm least squares for lambda = 0
  NormalEquations,  // Cholesky-type solve of (Xc^T Xc + lambda I) w = Xc^T yc
  Orthogonal,       // QR of the augmented system [Xc; sqrt(lambda) I]
};

std::string_view to_string(RidgeSolver solver);
RidgeSolver parse_ridge_solver(std::string_view name);

struct RidgeOptions {
  RidgeSolver solver = RidgeSolver::Auto;
  // Scale centred columns to unit variance before fitting; weights are mapped
  // back so the model always applies to raw features.
  bool standardize = false;
};

struct RidgeModel {
  RealVector weights;
  double bias = 0.0;
  double lambda = 0.0;
  std::vector<std::string> feature_names;  // optional ordering descriptor
};

// Minimises |X w + b - y|^2 + lambda |w|^2 with an unpenalised bias.
// With lambda = 0 the Auto solver returns the minimum-norm least-squares
// solution; NormalEquations with lambda = 0 on a rank-deficient X throws NumericalError.
RidgeModel ridge_fit(const FeatureMatrix& x, const RealVector& y, double lambda, RidgeOptions options = {});
RealVector ridge_predict(const RidgeModel& model, const FeatureMatrix& x);

// Squared Pearson correlation. Zero variance in either argument gives 0 and a warning.
double capacity(std::span<const double> y, std::span<const double> y_hat, Warnings* warnings = nullptr);
// RMSE / (max(y) - min(y)). Throws ConfigError for a constant target.
double scaled_rmse(std::span<const double> y, std::span<const double> y_hat);

inline std::span<const double> as_span(const RealVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

nlohmann::json to_json(const RidgeModel& model);
RidgeModel ridge_model_from_json(const nlohmann::json& j);

}  // namespace jcqrc
