#include "jcqrc/learning.hpp"

#include <gtest/gtest.h>

#include <random>

namespace jcqrc {
namespace {

RealMatrix random_real(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  RealMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

std::vector<double> vec(std::initializer_list<double> v) { return v; }

TEST(Ridge, IdentityDesignInterpolates) {
  const RealMatrix x = RealMatrix::Identity(5, 5);
  RealVector y(5);
  y << 0.3, -1.0, 2.5, 0.0, 7.0;
  const RidgeModel m = ridge_fit(x, y, 0.0);
  EXPECT_LT((ridge_predict(m, x) - y).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Ridge, RecoversLinearModel) {
  std::mt19937_64 rng(1);
  const RealMatrix x = random_real(200, 4, rng);
  const RealVector y = (3.0 * x.col(0)).array() + 1.0;
  const RidgeModel m = ridge_fit(x, y, 1e-10);
  EXPECT_NEAR(m.weights(0), 3.0, 1e-6);
  EXPECT_NEAR(m.bias, 1.0, 1e-6);
  for (Index j = 1; j < 4; ++j) EXPECT_NEAR(m.weights(j), 0.0, 1e-6);

  // Closed-form oracle with an explicit ones column and penalty only on w.
  RealMatrix a(200, 5);
  a.col(0).setOnes();
  a.rightCols(4) = x;
  RealMatrix penalty = RealMatrix::Identity(5, 5) * 0.7;
  penalty(0, 0) = 0.0;
  const RealVector y2 = y + 0.1 * random_real(200, 1, rng);
  const RealVector theta = (a.transpose() * a + penalty).ldlt().solve(a.transpose() * y2);
  const RidgeModel m2 = ridge_fit(x, y2, 0.7);
  EXPECT_NEAR(m2.bias, theta(0), 1e-10);
  EXPECT_LT((m2.weights - theta.tail(4)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Ridge, InfiniteShrinkage) {
  std::mt19937_64 rng(2);
  const RealMatrix x = random_real(50, 3, rng);
  const RealVector y = random_real(50, 1, rng);
  const RidgeModel m = ridge_fit(x, y, 1e15);
  EXPECT_LT(m.weights.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((ridge_predict(m, x).array() - y.mean()).abs().maxCoeff(), 1e-10);
}

TEST(Ridge, SolversAgree) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const RealMatrix x = random_real(120, 15, rng);
    const RealVector y = random_real(120, 1, rng);
    for (double lambda : {0.0, 0.05, 3.0}) {
      const RidgeModel a = ridge_fit(x, y, lambda, {RidgeSolver::NormalEquations});
      const RidgeModel b = ridge_fit(x, y, lambda, {RidgeSolver::Orthogonal});
      EXPECT_LT((a.weights - b.weights).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_NEAR(a.bias, b.bias, 1e-8);
    }
  }
}

TEST(Ridge, TrainingLossMonotoneInLambda) {
  std::mt19937_64 rng(4);
  const RealMatrix x = random_real(80, 20, rng);
  const RealVector y = random_real(80, 1, rng);
  double previous = INFINITY;
  for (double lambda : {100.0, 10.0, 1.0, 0.1, 0.01, 0.0}) {
    const RidgeModel m = ridge_fit(x, y, lambda);
    const double loss = (ridge_predict(m, x) - y).squaredNorm();
    EXPECT_LE(loss, previous + 1e-12) << lambda;
    previous = loss;
  }
}

TEST(Ridge, StandardizedFitMatchesManualScaling) {
  std::mt19937_64 rng(5);
  RealMatrix x = random_real(100, 3, rng);
  x.col(1) *= 50.0;
  const RealVector y = random_real(100, 1, rng);
  const RidgeModel s = ridge_fit(x, y, 0.5, {RidgeSolver::Auto, true});
  RealMatrix z = x.rowwise() - x.colwise().mean();
  RealVector sd(3);
  for (Index c = 0; c < 3; ++c) sd(c) = std::sqrt(z.col(c).squaredNorm() / 100.0);
  const RidgeModel manual = ridge_fit(z * sd.cwiseInverse().asDiagonal(), y, 0.5);
  EXPECT_LT((s.weights - manual.weights.cwiseQuotient(sd)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((ridge_predict(s, x) - ridge_predict(manual, z * sd.cwiseInverse().asDiagonal())).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(Ridge, Errors) {
  RealMatrix x = RealMatrix::Ones(4, 2);
  RealVector y = RealVector::Ones(4);
  EXPECT_THROW(ridge_fit(x, RealVector::Ones(3), 0.1), DimensionError);
  EXPECT_THROW(ridge_fit(x, y, -1.0), ConfigError);
  x(0, 0) = NAN;
  EXPECT_THROW(ridge_fit(x, y, 0.1), ConfigError);
  // Constant columns are rank deficient after centring.
  EXPECT_THROW(ridge_fit(RealMatrix::Ones(4, 2), y, 0.0, {RidgeSolver::NormalEquations}), NumericalError);
  EXPECT_NO_THROW(ridge_fit(RealMatrix::Ones(4, 2), y, 0.0));
}

TEST(Predict, ConstantAndPadding) {
  RidgeModel m;
  m.weights = RealVector::Zero(3);
  m.bias = 0.7;
  const RealVector p = ridge_predict(m, RealMatrix::Random(4, 3));
  EXPECT_TRUE((p.array() == 0.7).all());
  EXPECT_THROW(ridge_predict(m, RealMatrix::Zero(4, 2)), DimensionError);

  std::mt19937_64 rng(6);
  const RealMatrix x = random_real(30, 3, rng);
  const RealVector y = random_real(30, 1, rng);
  const RidgeModel fit = ridge_fit(x, y, 0.1);
  RidgeModel padded = fit;
  padded.weights.conservativeResize(4);
  padded.weights(3) = 0.0;
  RealMatrix xp(30, 4);
  xp << x, RealVector::Zero(30);
  EXPECT_EQ(ridge_predict(fit, x), ridge_predict(padded, xp));
}

TEST(Ridge, JsonRoundTrip) {
  RidgeModel m;
  m.weights = RealVector::LinSpaced(4, -1.0, 2.0);
  m.bias = 0.125;
  m.lambda = 0.05;
  m.feature_names = {"a", "b", "c", "d"};
  const RidgeModel back = ridge_model_from_json(to_json(m));
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(back.bias, m.bias);
  EXPECT_EQ(back.feature_names, m.feature_names);
}

TEST(Capacity, ExactValues) {
  const auto y = vec({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(capacity(y, y), 1.0);
  std::vector<double> affine;
  for (double v : y) affine.push_back(-2.0 * v + 5.0);
  EXPECT_NEAR(capacity(y, affine), 1.0, 1e-15);
  // cov = 6.5, var(y) = 5, var(y_hat) = 8.75 (sums of squared deviations)
  EXPECT_NEAR(capacity(y, vec({1, 2, 3, 5})), 6.5 * 6.5 / (5.0 * 8.75), 1e-14);
  EXPECT_NEAR(capacity(y, vec({1, 2, 3, 5})), 169.0 / 175.0, 1e-14);
}

TEST(Capacity, AffineInvarianceOnRandomVectors) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(50), b(50), a2(50), b2(50);
    for (int i = 0; i < 50; ++i) {
      a[i] = n(rng);
      b[i] = a[i] + n(rng);
      a2[i] = 3.5 * a[i] - 1.0;
      b2[i] = -0.2 * b[i] + 9.0;
    }
    EXPECT_NEAR(capacity(a, b), capacity(a2, b2), 1e-12);
  }
}

TEST(Capacity, ZeroVarianceWarns) {
  Warnings w;
  EXPECT_EQ(capacity(vec({1, 2, 3}), vec({5, 5, 5}), &w), 0.0);
  EXPECT_EQ(w.size(), 1u);
  EXPECT_THROW(capacity(vec({1}), vec({1})), DimensionError);
}

TEST(ScaledRmse, ExactValues) {
  EXPECT_EQ(scaled_rmse(vec({0, 1, 2}), vec({0, 1, 2})), 0.0);
  EXPECT_DOUBLE_EQ(scaled_rmse(vec({0, 1}), vec({1, 0})), 1.0);
  EXPECT_NEAR(scaled_rmse(vec({0, 1, 2}), vec({0.1, 1.1, 2.1})), 0.05, 1e-15);
  EXPECT_THROW(scaled_rmse(vec({1, 1}), vec({0, 1})), ConfigError);
}

}  // namespace
}  // namespace jcqrc
