#include "jcqrc/expm.hpp"

#include "jcqrc/error.hpp"

#include <array>
#include <cmath>

namespace jcqrc {
namespace {

double one_norm(const ComplexMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Pade numerator/denominator pieces: exp(A) ~ (V - U)^-1 (V + U).
template <std::size_t N>
void pade_low(const ComplexMatrix& a, const std::array<double, N>& b, ComplexMatrix& u,
              ComplexMatrix& v) {
  const Index n = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix power = id;
  ComplexMatrix odd = ComplexMatrix::Zero(n, n);
  ComplexMatrix even = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < N; k += 2) {
    even += b[k] * power;
    if (k + 1 < N) odd += b[k + 1] * power;
    power = power * a2;
  }
  u = a * odd;
  v = even;
}

void pade13(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const Index n = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                                b[5] * a4 + b[3] * a2 + b[1] * id;
  u = a * inner_u;
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

ComplexMatrix solve_pade(const ComplexMatrix& u, const ComplexMatrix& v) {
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm: matrix is not square");
  if (!a.allFinite()) throw NumericalError("expm: matrix has non-finite entries");
  const Index n = a.rows();
  if (n == 0) return a;

  static constexpr double theta3 = 1.495585217958292e-2;
  static constexpr double theta5 = 2.539398330063230e-1;
  static constexpr double theta7 = 9.504178996162932e-1;
  static constexpr double theta9 = 2.097847961257068e0;
  static constexpr double theta13 = 5.371920351148152e0;

  const double norm = one_norm(a);
  ComplexMatrix u;
  ComplexMatrix v;
  if (norm <= theta3) {
    pade_low(a, std::array<double, 4>{120.0, 60.0, 12.0, 1.0}, u, v);
    return solve_pade(u, v);
  }
  if (norm <= theta5) {
    pade_low(a, std::array<double, 6>{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0}, u, v);
    return solve_pade(u, v);
  }
  if (norm <= theta7) {
    pade_low(a,
             std::array<double, 8>{17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0,
                                   56.0, 1.0},
             u, v);
    return solve_pade(u, v);
  }
  if (norm <= theta9) {
    pade_low(a,
             std::array<double, 10>{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                    30270240.0, 2162160.0, 110880.0, 3960.0, 90.0, 1.0},
             u, v);
    return solve_pade(u, v);
  }
  const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
  const ComplexMatrix scaled = a * std::ldexp(1.0, -squarings);
  pade13(scaled, u, v);
  ComplexMatrix result = solve_pade(u, v);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace jcqrc
