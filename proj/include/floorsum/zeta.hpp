#pragma once

// Riemann zeta on the real ray s > 1 by Euler-Maclaurin: a direct sum of 63
// terms, the integral and half-term corrections at the cutoff, and eight
// Bernoulli-number corrections. The first omitted correction (through B_18),
// doubled, serves as a rigorous remainder bound; for real s > 0 the true
// remainder is below the first omitted term. Internal arithmetic runs in
// long double so the returned certificate stays near 1e-15 even close to
// s = 1, where the value itself grows like 1/(s-1).

#include <cmath>

#include "core.hpp"

namespace floorsum {

inline CertifiedValue zeta(double s) {
  if (!(s > 1.0)) throw domain_error("zeta: defined here only for s > 1");

  constexpr int kCutoff = 64;
  // B_2, B_4, ..., B_18 as exact rationals.
  static constexpr long double kBernoulli[9] = {
      1.0L / 6,    -1.0L / 30,      1.0L / 42, -1.0L / 30,       5.0L / 66,
      -691.0L / 2730, 7.0L / 6, -3617.0L / 510, 43867.0L / 798};

  const long double ls = static_cast<long double>(s);
  long double partial = 0.0L;
  long double mass = 0.0L;  // absolute mass, for the rounding bound
  for (int n = 1; n < kCutoff; ++n) {
    const long double t = powl(static_cast<long double>(n), -ls);
    partial += t;
    mass += t;
  }
  const long double N = static_cast<long double>(kCutoff);
  const long double tail_int = powl(N, 1.0L - ls) / (ls - 1.0L);
  const long double tail_half = 0.5L * powl(N, -ls);

  // Correction i is  B_{2i}/(2i)! * prod_{r=0}^{2i-2}(s+r) * N^{1-s-2i}.
  long double corrections = 0.0L;
  long double corr_mass = 0.0L;
  long double poch = ls;                      // running product of (s+r)
  long double npow = powl(N, -1.0L - ls);     // N^{1-s-2i} for i = 1
  long double fact = 2.0L;                    // (2i)!
  long double last_term = 0.0L;
  for (int i = 1; i <= 9; ++i) {
    const long double term = kBernoulli[i - 1] / fact * poch * npow;
    if (i <= 8) {
      corrections += term;
      corr_mass += fabsl(term);
    } else {
      last_term = term;  // first omitted correction: remainder estimator
    }
    poch *= (ls + 2 * i - 1) * (ls + 2 * i);
    npow /= N * N;
    fact *= (2 * i + 1) * (2 * i + 2);
  }

  const long double total = partial + tail_int + tail_half + corrections;
  const double value = static_cast<double>(total);

  const long double eps_ld = 1.0842e-19L;  // ulp scale of 80-bit long double
  const long double round_ld =
      (mass + fabsl(tail_int) + tail_half + corr_mass) * eps_ld * (kCutoff + 24);
  const double eps_d = std::numeric_limits<double>::epsilon();
  const double abs_error = static_cast<double>(2.0L * fabsl(last_term) + round_ld) +
                           std::abs(value) * eps_d;
  return CertifiedValue::make_float(value, abs_error, kCutoff + 8);
}

}  // namespace floorsum
