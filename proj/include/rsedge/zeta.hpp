#pragma once

// Riemann zeta via Euler-Maclaurin, valid for complex s != 1 with
// moderate |s|. Used for Laurent fits near s = 1 and for rigorous
// divisor-bound tail majorants.

#include <cmath>
#include <complex>
#include <stdexcept>

namespace rsedge {

// zeta(s) = sum_{n<M} n^{-s} + M^{1-s}/(s-1) + M^{-s}/2
//           + sum_k B_{2k}/(2k)! (s)(s+1)...(s+2k-2) M^{-s-2k+1}.
// Accurate to ~1e-15 for |s| <= 20 with M = 100.
inline std::complex<double> zeta_em(std::complex<double> s, int M = 100) {
  if (s == std::complex<double>{1.0, 0.0}) throw std::domain_error("zeta_em: pole at s = 1");
  std::complex<double> sum = 0.0;
  for (int n = 1; n < M; ++n) sum += std::pow(static_cast<double>(n), -s);
  const double Md = static_cast<double>(M);
  sum += std::pow(Md, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(Md, -s);
  // Bernoulli numbers B_2, B_4, B_6, B_8
  static constexpr double b2k[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};
  std::complex<double> rising = s;  // (s)(s+1)...(s+2k-2), k terms
  double fact = 2.0;                // (2k)!
  for (int k = 1; k <= 4; ++k) {
    sum += b2k[k - 1] / fact * rising * std::pow(Md, -s - (2.0 * k - 1.0));
    // extend rising product and factorial for next k
    rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
    fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
  }
  return sum;
}

inline double zeta_em_real(double s, int M = 100) { return zeta_em(std::complex<double>{s, 0.0}, M).real(); }

}  // namespace rsedge
