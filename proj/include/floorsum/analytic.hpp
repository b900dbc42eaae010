#pragma once

// Analytic ingredients behind the error-term study: the constant in the
// secondary main term, the predicted error exponent, the sawtooth ψ with its
// truncated Fourier surrogate, and the short totient-weighted sawtooth sums
// whose size the exponent bounds control.

#include "compensated.hpp"
#include "core.hpp"
#include "sieve.hpp"
#include "sums.hpp"
#include "zeta.hpp"

namespace floorsum {

// ---------------------------------------------------------------------------
// C(c') = sum_{n >= 1} phi(n) / (n^{c'} (n+1)), needed for c' >= 2.
//
// Direct summation converges far too slowly for a 1e-13 target, so the tail
// past N is accelerated: expanding 1/(n+1) into R geometric pieces turns it
// into tails of sum phi(n)/n^s, each of which equals zeta(s-1)/zeta(s) minus
// a computed partial sum. What survives is bounded by N^{1-c'-R}/(c'+R-1),
// negligible at the defaults N = 1e6, R = 3.
// ---------------------------------------------------------------------------
inline CertifiedValue series_constant(double c_prime, double eps = 1e-13,
                                      u64 N = 1'000'000, unsigned R = 3,
                                      const Budget& budget = {}) {
  if (!std::isfinite(c_prime) || c_prime < 2.0)
    throw domain_error("series_constant: c' must be a finite real >= 2");
  if (!(eps >= 1e-13)) throw domain_error("series_constant: eps must be >= 1e-13");
  if (N < 2 || R < 1 || R > 12) throw domain_error("series_constant: bad N or R");

  const double ri = std::nearbyint(c_prime);
  const bool integral = (c_prime == ri);
  const i64 ci = integral ? static_cast<i64>(ri) : 0;

  const ArithTable phi = sieve_phi(N, budget);
  NeumaierSum head;
  std::vector<NeumaierSum> partial(R);
  for (u64 n = 1; n <= N; ++n) {
    const double q0 =
        static_cast<double>(phi.at(n)) * detail::fpow(n, -c_prime, integral, -ci);
    head.add(q0 / static_cast<double>(n + 1));
    double q = q0 / static_cast<double>(n);
    for (unsigned r = 0; r < R; ++r) {
      partial[r].add(q);
      q /= static_cast<double>(n);
    }
  }

  NeumaierSum total;
  total.merge(head);
  double cert = head.certificate(8.0);
  double sign = 1.0;
  for (unsigned r = 0; r < R; ++r) {
    const double s = c_prime + 1.0 + static_cast<double>(r);
    const CertifiedValue znum = zeta(s - 1.0);
    const CertifiedValue zden = zeta(s);
    const double ratio = znum.value / zden.value;
    total.add(sign * (ratio - partial[r].value()));
    cert += partial[r].certificate(8.0);
    cert += (znum.abs_error + std::abs(ratio) * zden.abs_error) / zden.value;
    cert += std::abs(ratio) * 4.0 * std::numeric_limits<double>::epsilon();
    sign = -sign;
  }
  const double structural =
      std::pow(static_cast<double>(N), 1.0 - c_prime - static_cast<double>(R)) /
      (c_prime + static_cast<double>(R) - 1.0);
  cert += structural;
  cert += std::abs(total.value()) * 4.0 * std::numeric_limits<double>::epsilon();
  if (cert > eps)
    throw precision_error("series_constant: requested eps not reachable at this N, R");
  return CertifiedValue::make_float(total.value(), cert, N + static_cast<u64>(R));
}

// ---------------------------------------------------------------------------
// Predicted exponent for the error term, as a function of d = k - j >= 0:
// zero once d >= 1, and (5 - d)/(21 - d) on 0 <= d < 1.
// ---------------------------------------------------------------------------
inline double theta_exponent(const SumParams& p) {
  const double d = p.k - p.j;
  if (d < 0.0) throw domain_error("theta_exponent: requires k >= j");
  if (d >= 1.0) return 0.0;
  return (5.0 - d) / (21.0 - d);
}

// ---------------------------------------------------------------------------
// Leading main term. Two regimes are supported:
//   c = 1        x ln(x) / zeta(2)
//   c <= 0       C(2 - c) x
// Anything else (0 < c < 1, or c > 1) has no formula here and is rejected.
// ---------------------------------------------------------------------------
enum class MainCase { log_case, linear_case };

inline MainCase main_case(const SumParams& p) {
  if (p.c_integral && p.c_int == 1) return MainCase::log_case;
  if (p.c <= 0.0) return MainCase::linear_case;
  throw domain_error("main_term: no closed main term for this j, k");
}

// The formula itself at a real argument, with its certificate.
inline CertifiedValue main_term_value(const SumParams& p, double x, const Budget& budget = {}) {
  if (!(x >= 1.0)) throw domain_error("main_term: x must be >= 1");
  switch (main_case(p)) {
    case MainCase::log_case: {
      const CertifiedValue z2 = zeta(2.0);
      const double value = x * std::log(x) / z2.value;
      const double err = std::abs(value) * (z2.abs_error / z2.value +
                                            8.0 * std::numeric_limits<double>::epsilon());
      return CertifiedValue::make_float(value, err, z2.terms);
    }
    default: {
      const CertifiedValue C = series_constant(2.0 - p.c, 1e-13, 1'000'000, 3, budget);
      const double value = C.value * x;
      const double err = C.abs_error * x +
                         std::abs(value) * 4.0 * std::numeric_limits<double>::epsilon();
      return CertifiedValue::make_float(value, err, C.terms);
    }
  }
}

inline CertifiedValue main_term(const SumParams& p, u64 x, const Budget& budget = {}) {
  if (x == 0) throw domain_error("main_term: x must be >= 1");
  return main_term_value(p, static_cast<double>(x), budget);
}

// ---------------------------------------------------------------------------
// Sawtooth psi(t) = {t} - 1/2 and an exact-rational variant for integer
// arguments num/den, which the divisor-style sums below rely on.
// ---------------------------------------------------------------------------
inline double psi(double t) {
  return (t - std::floor(t)) - 0.5;
}

inline double psi_rational(u64 num, u64 den) {
  if (den == 0) throw domain_error("psi_rational: zero denominator");
  return static_cast<double>(num % den) / static_cast<double>(den) - 0.5;
}

// ---------------------------------------------------------------------------
// Vaaler-style smoothing weight Phi(t) = pi t (1 - |t|) cot(pi t) + |t| on
// |t| < 1, extended by its limit 1 at t = 0. Even in t. The small-|t| branch
// uses the cotangent series to dodge the 0/0.
// ---------------------------------------------------------------------------
inline double vaaler_phi(double t) {
  if (!(std::abs(t) < 1.0)) throw domain_error("vaaler_phi: requires |t| < 1");
  const double a = std::abs(t);
  if (a < 1e-7) {
    const double z2 = (kPi * t) * (kPi * t);
    return (1.0 - a) * (1.0 - z2 / 3.0 - z2 * z2 / 45.0) + a;
  }
  return kPi * t * (1.0 - a) * (std::cos(kPi * t) / std::sin(kPi * t)) + a;
}

// Fejer kernel bound for the truncation error, in closed form:
//   (1/2) (sin(pi (H+1) t) / ((H+1) sin(pi t)))^2
// with value 1/2 at integer t (the removable limit). Below
// |sin(pi t)| < 1e-8 a quadratic expansion around the nearest integer is
// used instead of the quotient.
inline double rh_bound(double t, unsigned H) {
  if (H < 1) throw domain_error("rh_bound: H must be >= 1");
  const double Np = static_cast<double>(H) + 1.0;
  // The kernel is 1-periodic and gets squared, so both sines may be taken
  // at the offset from the nearest integer; this keeps their arguments
  // small and dodges the cancellation the raw quotient suffers near
  // integer t.
  const double u = t - std::nearbyint(t);
  const double s = std::sin(kPi * u);
  if (std::abs(s) < 1e-8) {
    const double corr = 1.0 - (Np * Np - 1.0) * (kPi * u) * (kPi * u) / 3.0;
    return 0.5 * std::max(corr, 0.0);
  }
  const double q = std::sin(kPi * Np * u) / (Np * s);
  return 0.5 * q * q;
}

struct VaalerApprox {
  double approx;    // truncated Fourier surrogate for psi(t)
  double rh_bound;  // certified pointwise bound on psi(t) - approx
};

// psi(t) ~ -sum_{h=1}^{H} Phi(h/(H+1)) sin(2 pi h t)/(pi h), the conjugate
// pairs already combined. The companion bound dominates the truncation
// error pointwise.
inline VaalerApprox vaaler_approx(double t, unsigned H) {
  if (H < 1) throw domain_error("vaaler_approx: H must be >= 1");
  const double Np = static_cast<double>(H) + 1.0;
  const double tr = t - std::floor(t);  // exact 1-periodicity, small sin args
  NeumaierSum acc;
  for (unsigned h = 1; h <= H; ++h) {
    const double hh = static_cast<double>(h);
    acc.add(vaaler_phi(hh / Np) * std::sin(2.0 * kPi * hh * tr) / (kPi * hh));
  }
  return VaalerApprox{-acc.value(), rh_bound(t, H)};
}

// ---------------------------------------------------------------------------
// vartheta(x, z) = x sum_{m <= x/z} mu(m)/m psi(x/m). The psi arguments are
// exact rationals, so each term is clean; the certificate covers the
// compensated accumulation and the final scaling by x.
// ---------------------------------------------------------------------------
inline CertifiedValue vartheta(u64 x, double z, const Budget& budget = {}) {
  if (x == 0) throw domain_error("vartheta: x must be >= 1");
  if (!(z >= 1.0) || !(z <= static_cast<double>(x)))
    throw domain_error("vartheta: requires 1 <= z <= x");
  const u64 mmax = static_cast<u64>(static_cast<double>(x) / z);
  const ArithTable mu = sieve_mu(mmax, budget);
  NeumaierSum acc;
  for (u64 m = 1; m <= mmax; ++m) {
    const i64 mv = mu.at(m);
    if (mv == 0) continue;
    acc.add(static_cast<double>(mv) / static_cast<double>(m) * psi_rational(x, m));
  }
  const double xd = static_cast<double>(x);
  const double value = xd * acc.value();
  const double err = xd * acc.certificate(8.0) +
                     std::abs(value) * 2.0 * std::numeric_limits<double>::epsilon();
  return CertifiedValue::make_float(value, err, mmax);
}

// ---------------------------------------------------------------------------
// The short dyadic sawtooth sum
//   sum_{W < w <= 2W} phi(w) w^{c-1} psi(x/(w+delta)),  c = j - k,
// over one octave of w. Totients come from a windowed sieve, psi arguments
// are exact rationals. This is the quantity the envelope below is meant to
// dominate up to constants.
// ---------------------------------------------------------------------------
inline CertifiedValue mho_sum(u64 x, u64 W, unsigned delta, const SumParams& p,
                              const Budget& budget = {}) {
  if (x == 0 || W == 0) throw domain_error("mho_sum: x and W must be >= 1");
  if (delta > 1) throw domain_error("mho_sum: delta must be 0 or 1");
  const ArithTable phi = segment_phi(W + 1, 2 * W, budget);
  NeumaierSum acc;
  for (u64 w = W + 1; w <= 2 * W; ++w) {
    acc.add(static_cast<double>(phi.at(w)) *
            detail::fpow(w, p.c - 1.0, p.c_integral, p.c_int - 1) *
            psi_rational(x, w + delta));
  }
  return CertifiedValue::make_float(acc.value(), acc.certificate(8.0), W);
}

// ---------------------------------------------------------------------------
// Size envelopes for mho_sum, one per regime of W against x^{2/3}, each
// padded by x^eps. Only the ratio |mho| / envelope is ever reported; the
// implied constants are not effective, so nothing asserts against it.
// ---------------------------------------------------------------------------
struct EnvelopeReport {
  double small_regime;  // x^{-1/2} W^{1-d} + x^{1/6} W^{1/12-d}
  double large_regime;  // x^{-1/2} W^{7/8-d} + W^{5/16-d}
  bool large_selected;  // true when W^3 >= x^2
  double value;         // x^eps times the selected envelope
};

inline EnvelopeReport prop_bound_pieces(u64 x, u64 W, const SumParams& p, double eps = 0.01) {
  if (x == 0 || W == 0 || W > x) throw domain_error("envelope: requires 1 <= W <= x");
  const double d = p.k - p.j;
  if (d < 0.0 || d >= 1.0) throw domain_error("envelope: requires 0 <= k - j < 1");
  if (!(eps >= 0.0)) throw domain_error("envelope: eps must be >= 0");
  const double xd = static_cast<double>(x);
  const double Wd = static_cast<double>(W);
  EnvelopeReport rep{};
  rep.small_regime = std::pow(xd, -0.5) * std::pow(Wd, 1.0 - d) +
                     std::pow(xd, 1.0 / 6.0) * std::pow(Wd, 1.0 / 12.0 - d);
  rep.large_regime = std::pow(xd, -0.5) * std::pow(Wd, 7.0 / 8.0 - d) +
                     std::pow(Wd, 5.0 / 16.0 - d);
  if (W < (u64(1) << 42)) {
    const u128 w3 = static_cast<u128>(W) * W * W;
    const u128 x2 = static_cast<u128>(x) * x;
    rep.large_selected = (w3 >= x2);
  } else {
    rep.large_selected = (3.0 * std::log2(Wd) >= 2.0 * std::log2(xd));
  }
  rep.value = std::pow(xd, eps) * (rep.large_selected ? rep.large_regime : rep.small_regime);
  return rep;
}

inline double prop_bound_envelope(u64 x, u64 W, const SumParams& p, double eps = 0.01) {
  return prop_bound_pieces(x, W, p, eps).value;
}

}  // namespace floorsum
