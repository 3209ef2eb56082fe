#include "jcqrc/learning.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cctype>
#include <cmath>

namespace jcqrc {

namespace {

void require_finite(const RealMatrix& m, const char* what) {
  if (!m.allFinite()) throw ConfigError(std::string("ridge_fit: non-finite entries in ") + what);
}

void require_same_length(std::span<const double> a, std::span<const double> b, std::size_t min_len,
                         const char* who) {
  if (a.size() != b.size()) throw DimensionError(std::string(who) + ": length mismatch");
  if (a.size() < min_len)
    throw DimensionError(std::string(who) + ": need at least " + std::to_string(min_len) + " samples");
}

}  // namespace

std::string_view to_string(RidgeSolver solver) {
  switch (solver) {
    case RidgeSolver::Auto: return "auto";
    case RidgeSolver::NormalEquations: return "normal_equations";
    case RidgeSolver::Orthogonal: return "orthogonal";
  }
  return "unknown";
}

RidgeSolver parse_ridge_solver(std::string_view name) {
  if (name == "auto") return RidgeSolver::Auto;
  if (name == "normal_equations") return RidgeSolver::NormalEquations;
  if (name == "orthogonal") return RidgeSolver::Orthogonal;
  throw ConfigError("unknown ridge solver '" + std::string(name) + "'");
}

RidgeModel ridge_fit(const FeatureMatrix& x, const RealVector& y, double lambda, RidgeOptions options) {
  if (x.rows() != y.size()) throw DimensionError("ridge_fit: rows(X) != len(y)");
  if (x.rows() == 0) throw DimensionError("ridge_fit: empty training set");
  if (!std::isfinite(lambda) || lambda < 0.0) throw ConfigError("ridge_fit: lambda must be finite and >= 0");
  require_finite(x, "X");
  require_finite(y, "y");

  const Index p = x.rows();
  const Index n = x.cols();
  const RealVector x_mean = x.colwise().mean().transpose();
  const double y_mean = y.mean();
  RealMatrix xc = x.rowwise() - x_mean.transpose();
  const RealVector yc = y.array() - y_mean;

  RealVector scale = RealVector::Ones(n);
  if (options.standardize) {
    for (Index c = 0; c < n; ++c) {
      const double sd = std::sqrt(xc.col(c).squaredNorm() / static_cast<double>(p));
      if (sd > 0.0) scale(c) = sd;
    }
    xc = xc * scale.cwiseInverse().asDiagonal();
  }

  RidgeSolver solver = options.solver;
  if (solver == RidgeSolver::Auto) solver = lambda > 0.0 ? RidgeSolver::NormalEquations : RidgeSolver::Orthogonal;

  RealVector w;
  if (lambda == 0.0 && solver == RidgeSolver::Orthogonal) {
    w = xc.completeOrthogonalDecomposition().solve(yc);
  } else if (solver == RidgeSolver::NormalEquations) {
    RealMatrix gram = xc.transpose() * xc;
    gram.diagonal().array() += lambda;
    const RealVector rhs = xc.transpose() * yc;
    if (lambda == 0.0) {
      Eigen::FullPivLU<RealMatrix> lu(gram);
      if (!lu.isInvertible())
        throw NumericalError("ridge_fit: normal matrix is singular with lambda = 0; use lambda > 0");
      w = lu.solve(rhs);
    } else {
      Eigen::LDLT<RealMatrix> ldlt(gram);
      if (ldlt.info() != Eigen::Success) throw NumericalError("ridge_fit: normal-equation factorisation failed");
      w = ldlt.solve(rhs);
    }
  } else {
    RealMatrix augmented(p + n, n);
    augmented.topRows(p) = xc;
    augmented.bottomRows(n) = std::sqrt(lambda) * RealMatrix::Identity(n, n);
    RealVector rhs = RealVector::Zero(p + n);
    rhs.head(p) = yc;
    w = augmented.householderQr().solve(rhs);
  }

  w = w.cwiseQuotient(scale);
  if (!w.allFinite()) throw NumericalError("ridge_fit: non-finite weights");
  RidgeModel model;
  model.weights = w;
  model.bias = y_mean - x_mean.dot(w);
  model.lambda = lambda;
  return model;
}

RealVector ridge_predict(const RidgeModel& model, const FeatureMatrix& x) {
  if (x.cols() != model.weights.size())
    throw DimensionError("ridge_predict: X has " + std::to_string(x.cols()) + " columns, model expects " +
                         std::to_string(model.weights.size()));
  return (x * model.weights).array() + model.bias;
}

double capacity(std::span<const double> y, std::span<const double> y_hat, Warnings* warnings) {
  require_same_length(y, y_hat, 2, "capacity");
  const double n = static_cast<double>(y.size());
  double my = 0.0, mh = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    my += y[i];
    mh += y_hat[i];
  }
  my /= n;
  mh /= n;
  double cov = 0.0, vy = 0.0, vh = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dy = y[i] - my;
    const double dh = y_hat[i] - mh;
    cov += dy * dh;
    vy += dy * dy;
    vh += dh * dh;
  }
  if (vy <= 0.0 || vh <= 0.0) {
    if (warnings) warnings->push_back("capacity: zero variance in target or prediction, scored 0");
    return 0.0;
  }
  return std::clamp(cov * cov / (vy * vh), 0.0, 1.0);
}

double scaled_rmse(std::span<const double> y, std::span<const double> y_hat) {
  require_same_length(y, y_hat, 1, "scaled_rmse");
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw ConfigError("scaled_rmse: constant target has no range");
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) sum += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
  return std::sqrt(sum / static_cast<double>(y.size())) / range;
}

nlohmann::json to_json(const RidgeModel& model) {
  return {
      {"weights", std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size())},
      {"bias", model.bias},
      {"lambda", model.lambda},
      {"feature_names", model.feature_names},
  };
}

RidgeModel ridge_model_from_json(const nlohmann::json& j) {
  RidgeModel model;
  const auto weights = j.at("weights").get<std::vector<double>>();
  model.weights = Eigen::Map<const RealVector>(weights.data(), static_cast<Index>(weights.size()));
  model.bias = j.at("bias").get<double>();
  model.lambda = j.at("lambda").get<double>();
  if (j.contains("feature_names")) model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  if (!model.feature_names.empty() && model.feature_names.size() != weights.size())
    throw ConfigError("ridge model: feature_names and weights differ in length");
  return model;
}

}  // namespace jcqrc
