#include "jcqrc/error.hpp"
#include "jcqrc/models.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace jcqrc {
namespace {

using testing::max_abs;

ReservoirConfig jc(int levels) {
  ReservoirConfig c;
  c.model = Model::JC;
  c.n_levels = levels;
  return c;
}

// Independent construction from basis-state matrix elements; qubit q in {e=0, g=1},
// joint index q * n + level.
ComplexMatrix jc_oracle(const ReservoirConfig& c, double beta) {
  const Index n = c.n_levels;
  ComplexMatrix h = ComplexMatrix::Zero(2 * n, 2 * n);
  auto idx = [n](Index q, Index m) { return q * n + m; };
  for (Index m = 0; m < n; ++m) {
    h(idx(0, m), idx(0, m)) += (c.delta_b + c.delta) + c.delta_b * m;
    h(idx(1, m), idx(1, m)) += -(c.delta_b + c.delta) + c.delta_b * m;
    // alpha sx couples |e,m> and |g,m>
    h(idx(0, m), idx(1, m)) += c.alpha;
    h(idx(1, m), idx(0, m)) += c.alpha;
  }
  for (Index m = 1; m < n; ++m) {
    const double s = std::sqrt(static_cast<double>(m));
    // chi c sp: |g,m> -> |e,m-1>
    h(idx(0, m - 1), idx(1, m)) += c.chi * s;
    h(idx(1, m), idx(0, m - 1)) += c.chi * s;
    // i beta (c - c^dag) on each qubit block
    for (Index q = 0; q < 2; ++q) {
      h(idx(q, m - 1), idx(q, m)) += Complex(0.0, beta * s);
      h(idx(q, m), idx(q, m - 1)) += Complex(0.0, -beta * s);
    }
  }
  return h;
}

TEST(Hamiltonian, DecoupledJcIsDiagonal) {
  ReservoirConfig c = jc(4);
  c.delta_b = 1.3;
  c.delta = -0.4;
  c.chi = 0.0;
  const ComplexMatrix h = hamiltonian(c, 0.0);
  const SpaceLayout layout = c.layout();
  for (Index q = 0; q < 2; ++q)
    for (Index m = 0; m < 4; ++m) {
      const double sign = q == kExcited ? 1.0 : -1.0;
      EXPECT_NEAR(h(layout.index(q, m), layout.index(q, m)).real(), (1.3 - 0.4) * sign + 1.3 * m, 1e-14);
    }
  EXPECT_LT(max_abs(ComplexMatrix(h - ComplexMatrix(h.diagonal().asDiagonal()))), 1e-15);
}

TEST(Hamiltonian, DjcDiagonalEigenvalues) {
  ReservoirConfig c = jc(5);
  c.model = Model::DJC;
  c.chi = 0.7;
  const ComplexMatrix h = hamiltonian(c, 0.0);
  const SpaceLayout layout = c.layout();
  for (Index m = 0; m < 5; ++m) {
    EXPECT_NEAR(h(layout.index(kExcited, m), layout.index(kExcited, m)).real(), 0.7 * m, 1e-14);
    EXPECT_NEAR(h(layout.index(kGround, m), layout.index(kGround, m)).real(), -0.7 * m, 1e-14);
  }
  EXPECT_LT(max_abs(ComplexMatrix(h - ComplexMatrix(h.diagonal().asDiagonal()))), 1e-15);
}

TEST(Hamiltonian, JcMatchesTermByTermOracle) {
  ReservoirConfig c = jc(3);
  c.chi = 1.0;
  const ComplexMatrix h = hamiltonian(c, 0.5);
  EXPECT_EQ(hermiticity_defect(h), 0.0);
  EXPECT_LT(max_abs(h - jc_oracle(c, 0.5)), 1e-15);

  ReservoirConfig d = jc(6);
  d.delta_b = 2.0;
  d.delta = 1.5;
  d.chi = 0.6;
  d.alpha = 0.8;
  EXPECT_LT(max_abs(hamiltonian(d, -0.3) - jc_oracle(d, -0.3)), 1e-14);
}

TEST(Hamiltonian, HermitianAndAffineInBeta) {
  for (Model model : {Model::JC, Model::DJC, Model::QQ_JC, Model::QQ_DJC}) {
    ReservoirConfig c = jc(6);
    c.model = model;
    c.alpha = 0.9;
    c.delta = 0.3;
    const ComplexMatrix h0 = hamiltonian(c, 0.0);
    const ComplexMatrix h1 = hamiltonian(c, 1.0);
    for (double beta : {-2.0, 0.25, 0.7, 13.0}) {
      const ComplexMatrix h = hamiltonian(c, beta);
      EXPECT_LT(hermiticity_defect(h), 1e-15) << to_string(model);
      EXPECT_LT(max_abs(h - (h0 + beta * (h1 - h0))), 1e-12) << to_string(model);
    }
    EXPECT_EQ(h0.rows(), is_bosonic(model) ? 12 : 4);
  }
}

TEST(Hamiltonian, DjcCommutesWithGenerator) {
  ReservoirConfig c = jc(7);
  c.model = Model::DJC;
  c.chi = 1.9;
  const ComplexMatrix h = hamiltonian(c, 0.0);
  const SpaceLayout layout = c.layout();
  const ComplexMatrix gen = kron(build_qubit_ops().sz, build_boson_ops(layout).n);
  EXPECT_LT(max_abs(h * gen - gen * h), 1e-14);
}

TEST(Hamiltonian, QqJcSecondQubitTerm) {
  ReservoirConfig c;
  c.model = Model::QQ_JC;
  c.delta_b = 2.0;
  c.delta = 0.0;
  c.chi = 0.0;
  const ComplexMatrix h = hamiltonian(c, 0.0);
  const SpaceLayout layout = c.layout();
  // (delta + delta_b) sz1 + (delta_b/2) sz2
  EXPECT_NEAR(h(layout.index(kExcited, kExcited), layout.index(kExcited, kExcited)).real(), 2.0 + 1.0, 1e-15);
  EXPECT_NEAR(h(layout.index(kExcited, kGround), layout.index(kExcited, kGround)).real(), 2.0 - 1.0, 1e-15);
  EXPECT_NEAR(h(layout.index(kGround, kGround), layout.index(kGround, kGround)).real(), -3.0, 1e-15);
}

TEST(Hamiltonian, QqDjcConditionalShift) {
  ReservoirConfig c;
  c.model = Model::QQ_DJC;
  c.chi = 1.5;
  const ComplexMatrix h = hamiltonian(c, 0.0);
  const SpaceLayout layout = c.layout();
  EXPECT_NEAR(h(layout.index(kExcited, kExcited), layout.index(kExcited, kExcited)).real(), 1.5, 1e-15);
  EXPECT_NEAR(h(layout.index(kGround, kExcited), layout.index(kGround, kExcited)).real(), -1.5, 1e-15);
  EXPECT_NEAR(h(layout.index(kExcited, kGround), layout.index(kExcited, kGround)).real(), 0.0, 1e-15);
}

TEST(Hamiltonian, RejectsBadInput) {
  ReservoirConfig c = jc(4);
  EXPECT_THROW(hamiltonian(c, std::nan("")), ConfigError);
  c.kappa = 0.0;
  EXPECT_THROW(hamiltonian(c, 0.0), ConfigError);
  c = jc(1);
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(parse_model("Kerr"), ConfigError);
  EXPECT_EQ(parse_model("djc"), Model::DJC);
}

TEST(LindbladJump, Shapes) {
  ReservoirConfig c = jc(2);
  ComplexMatrix a(2, 2);
  a << 0, 1, 0, 0;
  EXPECT_EQ(lindblad_jump(c), kron(identity(2), a));

  c.model = Model::QQ_JC;
  EXPECT_EQ(lindblad_jump(c), kron(identity(2), build_qubit_ops().sm));
}

TEST(LindbladJump, AnnihilatesGroundVacuum) {
  for (Model model : {Model::JC, Model::DJC, Model::QQ_JC, Model::QQ_DJC}) {
    ReservoirConfig c = jc(5);
    c.model = model;
    const SpaceLayout layout = c.layout();
    Eigen::VectorXcd ground = Eigen::VectorXcd::Zero(layout.joint_dim());
    // Vacuum of the boson is level 0; the second qubit's ground state is index kGround.
    ground(layout.index(kGround, is_bosonic(model) ? 0 : kGround)) = 1.0;
    EXPECT_LT((lindblad_jump(c) * ground).norm(), 1e-15) << to_string(model);
  }
}

}  // namespace
}  // namespace jcqrc
