// hilbert.hpp: qubit and truncated-boson operators on the joint qubit ⊗ boson space.
//
// Conventions used throughout the library:
//   * joint space is always qubit ⊗ boson, joint index = qubit * boson_dim + level;
//   * qubit basis is ordered (|e>, |g>), so sz = diag(+1, -1);
//   * boson level 0 is the vacuum, c(n-1, n) = sqrt(n).
// For the two-qubit reservoirs the "boson" factor is a second qubit with the
// same (|e>, |g>) ordering.
#pragma once

#include <Eigen/Dense>

#include <complex>

namespace jcqrc {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Index kExcited = 0;
inline constexpr Index kGround = 1;

struct SpaceLayout {
  static constexpr Index qubit_dim = 2;
  Index boson_dim = 2;

  Index joint_dim() const { return qubit_dim * boson_dim; }
  Index index(Index qubit, Index level) const { return qubit * boson_dim + level; }
  bool operator==(const SpaceLayout&) const = default;
};

// Throws ConfigError when boson_dim < 2.
SpaceLayout make_layout(Index boson_dim);

struct BosonOps {
  ComplexMatrix c;
  ComplexMatrix c_dag;
  ComplexMatrix n;
};

struct QubitOps {
  ComplexMatrix sz;
  ComplexMatrix sp;  // |e><g|
  ComplexMatrix sm;  // |g><e|
  ComplexMatrix sx;
};

BosonOps build_boson_ops(const SpaceLayout& layout);
QubitOps build_qubit_ops();

ComplexMatrix identity(Index dim);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Embeddings into the joint space of `layout`.
ComplexMatrix on_qubit(const ComplexMatrix& op, const SpaceLayout& layout);
ComplexMatrix on_boson(const ComplexMatrix& op, const SpaceLayout& layout);

// rho_b[m, n] = sum_q rho[(q, m), (q, n)].
ComplexMatrix partial_trace_qubit(const ComplexMatrix& rho, const SpaceLayout& layout);
// rho_q[a, b] = sum_m rho[(a, m), (b, m)].
ComplexMatrix partial_trace_boson(const ComplexMatrix& rho, const SpaceLayout& layout);

// tr(rho * op).
Complex expectation(const ComplexMatrix& rho, const ComplexMatrix& op);

// max_ij |m - m^dagger|_ij
double hermiticity_defect(const ComplexMatrix& m);

}  // namespace jcqrc
