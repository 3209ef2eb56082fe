// expm.hpp: dense matrix exponential and the action of an operator exponential.
#pragma once

#include "jcqrc/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace jcqrc {

// exp(A) by scaling and squaring with a diagonal Pade approximant of degree
// 3, 5, 7, 9 or 13, selected from the 1-norm of A (backward error at the level
// of unit roundoff).
ComplexMatrix expm(const ComplexMatrix& a);

struct ExpActionStats {
  int substeps = 0;
  int applications = 0;
};

// exp(t * A) v for a linear operator given only through `apply(x) -> A x`,
// using truncated Taylor series on `s` substeps chosen so that
// norm_bound * |t| / s <= substep_norm. The series on each substep stops once two
// consecutive terms fall below `tolerance` relative to the partial sum.
// `norm_bound` must bound the operator norm induced by `.norm()` on the vectors.
template <class Vec, class Apply>
Vec exp_action(Apply&& apply, double norm_bound, double t, Vec v, double tolerance = 1e-14,
               double substep_norm = 6.0, int max_terms = 80, ExpActionStats* stats = nullptr) {
  const double scaled = std::abs(t) * std::max(norm_bound, 0.0);
  const int substeps = std::max(1, static_cast<int>(std::ceil(scaled / substep_norm)));
  const double h = t / substeps;
  Vec total = v;
  int applications = 0;
  for (int s = 0; s < substeps; ++s) {
    Vec term = total;
    double previous = term.norm();
    for (int k = 1; k <= max_terms; ++k) {
      term = apply(term);
      term *= h / static_cast<double>(k);
      ++applications;
      const double current = term.norm();
      total += term;
      if (previous + current <= tolerance * total.norm()) break;
      previous = current;
    }
  }
  if (stats != nullptr) {
    stats->substeps += substeps;
    stats->applications += applications;
  }
  return total;
}

}  // namespace jcqrc
