#include "jcqrc/error.hpp"
#include "jcqrc/hilbert.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace jcqrc {
namespace {

using testing::max_abs;
using testing::random_density;
using testing::random_matrix;

TEST(BosonOps, TwoLevelAnnihilation) {
  const BosonOps ops = build_boson_ops(make_layout(2));
  ComplexMatrix expected(2, 2);
  expected << 0, 1, 0, 0;
  EXPECT_EQ(ops.c, expected);
}

TEST(BosonOps, NumberOperatorIsDiagonal) {
  const BosonOps ops = build_boson_ops(make_layout(3));
  ComplexMatrix expected = ComplexMatrix::Zero(3, 3);
  expected(1, 1) = 1;
  expected(2, 2) = 2;
  EXPECT_LT(max_abs(ops.n - expected), 1e-15);
  EXPECT_EQ(ops.c_dag, ops.c.adjoint());
}

TEST(BosonOps, TruncatedCommutator) {
  const BosonOps ops = build_boson_ops(make_layout(4));
  const ComplexMatrix comm = ops.c * ops.c_dag - ops.c_dag * ops.c;
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      const double expected = (i != j) ? 0.0 : (i < 3 ? 1.0 : -3.0);
      EXPECT_NEAR(comm(i, j).real(), expected, 1e-12) << i << "," << j;
      EXPECT_EQ(comm(i, j).imag(), 0.0);
    }
  }
}

// sqrt(n)^2 is not exactly n in binary floating point, so "exact" means within
// a few ulps of the largest diagonal entry.
TEST(BosonOps, CommutatorOnLowerLevels) {
  for (Index n : {2, 5, 15, 40}) {
    const BosonOps ops = build_boson_ops(make_layout(n));
    const ComplexMatrix comm = ops.c * ops.c_dag - ops.c_dag * ops.c;
    const double ulps = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n);
    for (Index i = 0; i + 1 < n; ++i) {
      EXPECT_NEAR(comm(i, i).real(), 1.0, ulps) << "n=" << n << " i=" << i;
      EXPECT_EQ(comm(i, i).imag(), 0.0);
    }
    EXPECT_EQ((comm - ComplexMatrix(comm.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(BosonOps, RejectsTinyLayout) {
  EXPECT_THROW(make_layout(1), ConfigError);
  EXPECT_THROW(build_boson_ops(SpaceLayout{1}), ConfigError);
}

TEST(QubitOps, PauliAlgebra) {
  const QubitOps q = build_qubit_ops();
  EXPECT_LT(max_abs(q.sz * q.sp - q.sp * q.sz - 2.0 * q.sp), 1e-15);
  EXPECT_LT(max_abs(q.sp * q.sm - 0.5 * (identity(2) + q.sz)), 1e-15);
  EXPECT_LT(max_abs(q.sx * q.sx - identity(2)), 1e-15);
  EXPECT_EQ(q.sz(kExcited, kExcited), Complex(1.0, 0.0));
  EXPECT_EQ(q.sz(kGround, kGround), Complex(-1.0, 0.0));
  EXPECT_EQ(q.sp(kExcited, kGround), Complex(1.0, 0.0));
}

TEST(Kron, IdentityAndLayout) {
  EXPECT_EQ(kron(identity(2), identity(3)), identity(6));
  const QubitOps q = build_qubit_ops();
  const ComplexMatrix m = kron(q.sz, identity(2));
  const Eigen::Vector4cd diag = m.diagonal();
  EXPECT_EQ(diag, Eigen::Vector4cd(1, 1, -1, -1));
}

// Oracle: brute-force element formula (A (x) B)[i p + k, j q + l] = A[i,j] B[k,l].
TEST(Kron, MatchesElementFormula) {
  std::mt19937_64 rng(11);
  const ComplexMatrix a = random_matrix(2, 3, rng);
  const ComplexMatrix b = random_matrix(4, 2, rng);
  const ComplexMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 8);
  ASSERT_EQ(k.cols(), 6);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j)
      for (Index r = 0; r < 4; ++r)
        for (Index s = 0; s < 2; ++s) EXPECT_EQ(k(i * 4 + r, j * 2 + s), a(i, j) * b(r, s));
}

TEST(Kron, MixedProductProperty) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_matrix(2, 2, rng), b = random_matrix(2, 2, rng);
    const ComplexMatrix c = random_matrix(2, 2, rng), d = random_matrix(2, 2, rng);
    EXPECT_LT(max_abs(kron(a, b) * kron(c, d) - kron(a * c, b * d)), 1e-12);
  }
}

TEST(PartialTrace, ProductState) {
  const SpaceLayout layout = make_layout(3);
  ComplexMatrix g = ComplexMatrix::Zero(2, 2);
  g(kGround, kGround) = 1;
  ComplexMatrix one = ComplexMatrix::Zero(3, 3);
  one(1, 1) = 1;
  EXPECT_LT(max_abs(partial_trace_qubit(kron(g, one), layout) - one), 1e-15);
}

TEST(PartialTrace, EntangledState) {
  const SpaceLayout layout = make_layout(2);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(layout.index(kExcited, 0)) = 1.0 / std::sqrt(2.0);
  psi(layout.index(kGround, 1)) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix rho_b = partial_trace_qubit(psi * psi.adjoint(), layout);
  EXPECT_NEAR(rho_b(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(rho_b(1, 1).real(), 0.5, 1e-15);
  EXPECT_LT(std::abs(rho_b(0, 1)), 1e-15);
}

TEST(PartialTrace, MatchesIndexSumAndPreservesTrace) {
  std::mt19937_64 rng(5);
  const SpaceLayout layout = make_layout(4);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix rho = random_density(8, rng);
    const ComplexMatrix rho_b = partial_trace_qubit(rho, layout);
    for (Index m = 0; m < 4; ++m)
      for (Index n = 0; n < 4; ++n) {
        Complex sum = 0;
        for (Index q = 0; q < 2; ++q) sum += rho(q * 4 + m, q * 4 + n);
        EXPECT_LT(std::abs(rho_b(m, n) - sum), 1e-15);
      }
    EXPECT_NEAR(std::abs(rho_b.trace() - Complex(1.0, 0.0)), 0.0, 1e-12);
    EXPECT_LT(hermiticity_defect(rho_b), 1e-12);
    const ComplexMatrix rho_q = partial_trace_boson(rho, layout);
    EXPECT_NEAR(std::abs(rho_q.trace() - Complex(1.0, 0.0)), 0.0, 1e-12);
  }
}

TEST(PartialTrace, DimensionMismatchThrows) {
  EXPECT_THROW(partial_trace_qubit(identity(5), make_layout(3)), DimensionError);
}

TEST(Expectation, BasicValues) {
  const SpaceLayout layout = make_layout(4);
  const BosonOps ops = build_boson_ops(layout);
  ComplexMatrix vacuum = ComplexMatrix::Zero(4, 4);
  vacuum(0, 0) = 1;
  EXPECT_EQ(expectation(vacuum, ops.n), Complex(0.0, 0.0));
  ComplexMatrix two = ComplexMatrix::Zero(4, 4);
  two(2, 2) = 1;
  EXPECT_NEAR(expectation(two, ops.n * ops.n).real(), 4.0, 1e-14);
  EXPECT_THROW(expectation(vacuum, identity(3)), DimensionError);
}

TEST(Expectation, AdjointIdentityAndHermitianReality) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix rho = random_density(6, rng);
    const ComplexMatrix op = random_matrix(6, 6, rng);
    EXPECT_LT(std::abs(expectation(rho, op) - std::conj(expectation(rho, op.adjoint()))), 1e-12);
    const ComplexMatrix h = op + op.adjoint();
    EXPECT_LT(std::abs(expectation(rho, h).imag()), 1e-12);
    // Oracle: explicit trace of the product.
    EXPECT_LT(std::abs(expectation(rho, op) - (rho * op).trace()), 1e-12);
  }
}

TEST(Adjoint, DoubleAdjointIsBitExact) {
  std::mt19937_64 rng(1);
  const ComplexMatrix m = random_matrix(5, 5, rng);
  EXPECT_EQ(ComplexMatrix(m.adjoint().adjoint()), m);
}

}  // namespace
}  // namespace jcqrc
