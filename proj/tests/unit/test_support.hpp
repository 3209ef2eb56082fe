#pragma once

#include "jcqrc/hilbert.hpp"

#include <random>

namespace jcqrc::testing {

inline ComplexMatrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

// Random full-rank density matrix: A A^dag / tr.
inline ComplexMatrix random_density(Index dim, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(dim, dim, rng);
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace jcqrc::testing
