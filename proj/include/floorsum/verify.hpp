#pragma once

// Verification suites: cross-algorithm oracles, exact big-integer identity
// checks, pointwise sandwich bounds, asymptotic ratio checks, and the
// empirical error-exponent fit.

#include <algorithm>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "blocks.hpp"
#include "core.hpp"
#include "sieve.hpp"
#include "summatory.hpp"
#include "sums.hpp"
#include "zeta.hpp"

namespace floorsum {

// ---------------------------------------------------------------------------
/// Cross-evaluator oracle: the three evaluation strategies must agree for
// every x up to x_max. Exact mode demands integer equality; float mode
// allows at most the sum of the two certificates.
// ---------------------------------------------------------------------------
struct OracleReport {
  bool ok = true;
  u64 checked = 0;
  u64 first_failure = 0;  // x of the first disagreement; 0 when ok
  std::string detail;
};

inline OracleReport oracle_check(const SumParams& p, u64 x_max, const Budget& budget = {}) {
  if (x_max == 0 || x_max > 100'000)
    throw domain_error("oracle_check: exhaustive sweep supports 1 <= x_max <= 1e5");
  OracleReport rep;
  for (u64 x = 1; x <= x_max; ++x) {
    const CertifiedValue a = s_naive(p, x, budget);
    const CertifiedValue b = s_block(p, x, budget);
    const CertifiedValue h = s_hybrid(p, x, budget);
    bool same;
    if (p.exact) {
      same = (a.int_value == b.int_value) && (b.int_value == h.int_value);
    } else {
      const double ab = std::abs(a.value - b.value);
      const double ah = std::abs(a.value - h.value);
      same = ab <= a.abs_error + b.abs_error && ah <= a.abs_error + h.abs_error;
    }
    ++rep.checked;
    if (!same) {
      rep.ok = false;
      rep.first_failure = x;
      rep.detail = "naive=" + a.text() + " block=" + b.text() + " hybrid=" + h.text();
      return rep;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Exact three-way split of sum_{m d <= x} mu(m) d at a pivot z:
//   S1 = sum_{m <= x/z} mu(m) T(floor(x/m))      T(n) = n(n+1)/2
//   S2 = sum_{d <= z}   d M(floor(x/d))
//   S3 = M(floor(x/z)) T(floor(z))
// The recombination S1 + S2 - S3 equals the summatory totient of x, and
// every quantity here is an exact integer. Note floor(x/z) for real z need
// not be a quotient floor(x/n), so M(floor(x/z)) comes from the mu sieve
// prefix rather than from the quotient-indexed cache.
// ---------------------------------------------------------------------------
struct DecompositionReport {
  BigInt sigma1, sigma2, sigma3;
  BigInt combined;   // sigma1 + sigma2 - sigma3
  BigInt reference;  // summatory totient at x
  bool ok = false;
};

inline DecompositionReport hyperbola_decomposition_check(u64 x, double z,
                                                         const Budget& budget = {}) {
  if (x == 0) throw domain_error("hyperbola check: x must be >= 1");
  if (!(z >= 1.0) || !(z <= static_cast<double>(x)))
    throw domain_error("hyperbola check: requires 1 <= z <= x");
  if (x > 10'000'000) throw capacity_error("hyperbola check: x above the direct-sum guard");

  const u64 a = static_cast<u64>(static_cast<double>(x) / z);  // mu range
  const u64 b = static_cast<u64>(z);                           // d range

  const ArithTable mu = sieve_mu(a, budget);
  i128 s1 = 0;
  i64 mertens_at_a = 0;
  for (u64 m = 1; m <= a; ++m) {
    const i64 mv = mu.at(m);
    mertens_at_a += mv;
    if (mv != 0) s1 += static_cast<i128>(mv) * static_cast<i128>(triangular(x / m));
  }

  const SummatoryCache mc(SummatoryCache::Kind::mertens, x, budget);
  i128 s2 = 0;
  for (u64 d = 1; d <= b; ++d) s2 += static_cast<i128>(d) * mc.mu_prefix(x / d);

  const i128 s3 = static_cast<i128>(mertens_at_a) * static_cast<i128>(triangular(b));

  DecompositionReport rep;
  rep.sigma1 = big_from_i128(s1);
  rep.sigma2 = big_from_i128(s2);
  rep.sigma3 = big_from_i128(s3);
  rep.combined = rep.sigma1 + rep.sigma2 - rep.sigma3;
  rep.reference = totient_summatory(x, budget);
  rep.ok = (rep.combined == rep.reference);
  return rep;
}

// ---------------------------------------------------------------------------
// Residual of the summatory totient against its smoothed form: with Phi the
// summatory totient, returns Phi(x) - x^2/(2 zeta(2)) + vartheta(x, z). The
// magnitude is reported, never asserted (its coefficient is not effective).
// ---------------------------------------------------------------------------
inline double summatory_residual_with_phi(const BigInt& phi_of_x, u64 x, double z,
                                          const Budget& budget = {}) {
  const double xd = static_cast<double>(x);
  const double smooth = xd * xd / (2.0 * zeta(2.0).value);
  return phi_of_x.convert_to<double>() - smooth + vartheta(x, z, budget).value;
}

inline double summatory_residual(u64 x, double z, const Budget& budget = {}) {
  if (x == 0) throw domain_error("summatory_residual: x must be >= 1");
  const double zcap = std::cbrt(static_cast<double>(x));
  if (!(z >= 1.0) || z > zcap + 1e-9)
    throw domain_error("summatory_residual: requires 1 <= z <= x^(1/3)");
  return summatory_residual_with_phi(totient_summatory(x, budget), x, z, budget);
}

// ---------------------------------------------------------------------------
// Pointwise sandwich for integer c >= 2. Since phi(1) = 1 and
// 1 <= phi(m) <= m - 1 for m >= 2, with m = floor(x/n),
//   L = sum m^{c-1}  <=  S  <=  sum m^c - sum m^{c-1} + (x - floor(x/2)) = U,
// the last term undoing the m = 1 overshoot (those n with floor(x/n) = 1).
// Both comparisons are exact. Asymptotic quality is reported as ratios.
// ---------------------------------------------------------------------------
struct SandwichReport {
  BigInt lower, value, upper;
  bool ok = false;
  double zeta_ratio = 0.0;   // S / (zeta(c) x^c)
  double lower_ratio = 0.0;  // S / (2 sum m^{c-1})
};

inline SandwichReport sandwich_check(const SumParams& p, u64 x, const Budget& budget = {}) {
  if (!p.exact || p.c_int < 2)
    throw domain_error("sandwich_check: requires integer c = j - k >= 2");
  if (x == 0) throw domain_error("sandwich_check: x must be >= 1");
  const CertifiedValue low = sum_of_floor_powers(x, static_cast<double>(p.c_int - 1), budget);
  const CertifiedValue pow_c = sum_of_floor_powers(x, static_cast<double>(p.c_int), budget);
  const CertifiedValue s = x <= 1'000'000 ? s_block(p, x, budget) : s_hybrid(p, x, budget);

  SandwichReport rep;
  rep.lower = low.int_value;
  rep.value = s.int_value;
  rep.upper = pow_c.int_value - low.int_value + BigInt(x - x / 2);
  rep.ok = rep.lower <= rep.value && rep.value <= rep.upper;
  const double xc = std::pow(static_cast<double>(x), static_cast<double>(p.c_int));
  rep.zeta_ratio = s.as_double() / (zeta(static_cast<double>(p.c_int)).value * xc);
  rep.lower_ratio = s.as_double() / (2.0 * low.as_double());
  return rep;
}

// ---------------------------------------------------------------------------
// Relative distance of sum floor(x/n)^c from zeta(c) x^c. Decays roughly
// like 1/x for fixed c > 1; thresholds live with the callers.
// ---------------------------------------------------------------------------
inline double floor_power_asymptotic_check(u64 x, double c, const Budget& budget = {}) {
  if (x < 10) throw domain_error("floor_power_asymptotic_check: x must be >= 10");
  if (!(c > 1.0)) throw domain_error("floor_power_asymptotic_check: c must be > 1");
  const double ref = zeta(c).value * std::pow(static_cast<double>(x), c);
  return std::abs(sum_of_floor_powers(x, c, budget).as_double() / ref - 1.0);
}

// ---------------------------------------------------------------------------
// Empirical error exponent: least squares on log10|S - main| vs log10 x over
// a geometric grid. A sample enters the fit only when its deviation clears
// ten times the combined certificates, so noise cannot masquerade as signal.
// ---------------------------------------------------------------------------
struct ErrorSample {
  u64 x = 0;
  CertifiedValue s_value;
  CertifiedValue main;
  double delta = 0.0;
  double seconds = 0.0;
  bool admitted = false;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<ErrorSample> samples;
  double theta_reference = 0.0;
};

inline FitResult fit_error_exponent(const SumParams& p, u64 x_min, u64 x_max, unsigned points,
                                    const Budget& budget = {}) {
  if (p.k - p.j < 0.0) throw domain_error("fit_error_exponent: requires k >= j");
  if (x_min < 1000 || x_max <= x_min) throw domain_error("fit_error_exponent: bad grid range");
  if (points < 5) throw domain_error("fit_error_exponent: needs at least 5 grid points");

  std::vector<u64> grid;
  const double lo = std::log(static_cast<double>(x_min));
  const double hi = std::log(static_cast<double>(x_max));
  for (unsigned i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    const u64 x = static_cast<u64>(std::llround(std::exp(lo + (hi - lo) * t)));
    if (grid.empty() || x > grid.back()) grid.push_back(x);
  }

  FitResult fit;
  fit.theta_reference = theta_exponent(p);
  const CertifiedValue C = series_constant(2.0 - p.c, 1e-13, 1'000'000, 3, budget);
  for (u64 x : grid) {
    ErrorSample s;
    s.x = x;
    StopWatch timer;
    s.s_value = s_hybrid(p, x, budget);
    s.seconds = timer.seconds();
    // Reuse the one constant evaluation across the grid.
    const double mv = C.value * static_cast<double>(x);
    s.main = CertifiedValue::make_float(
        mv, C.abs_error * static_cast<double>(x) +
                std::abs(mv) * 4.0 * std::numeric_limits<double>::epsilon(),
        C.terms);
    s.delta = s.s_value.as_double() - s.main.value;
    s.admitted = std::abs(s.delta) > 10.0 * (s.s_value.abs_error + s.main.abs_error);
    fit.samples.push_back(s);
  }

  long double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  unsigned n = 0;
  for (const ErrorSample& s : fit.samples) {
    if (!s.admitted) continue;
    const long double lx = std::log10(static_cast<long double>(s.x));
    const long double ly = std::log10(std::abs(static_cast<long double>(s.delta)));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
    ++n;
  }
  if (n < 5) throw insufficient_data_error("fit_error_exponent: fewer than 5 admitted samples");
  const long double det = n * sxx - sx * sx;
  const long double slope = (n * sxy - sx * sy) / det;
  const long double intercept = (sy - slope * sx) / n;
  const long double ss_tot = syy - sy * sy / n;
  const long double ss_res = syy - intercept * sy - slope * sxy;
  fit.slope = static_cast<double>(slope);
  fit.intercept = static_cast<double>(intercept);
  fit.r_squared = ss_tot > 0 ? static_cast<double>(1.0L - std::max(0.0L, ss_res) / ss_tot) : 1.0;
  return fit;
}

// ---------------------------------------------------------------------------
// The c = 1 family has main term x ln(x)/zeta(2); the normalized ratio
// S_{2,1}(x) zeta(2)/(x ln x) drifts toward 1 with a relative error of
// roughly 1/ln x, so convergence is judged against a baseline, not
// step-by-step.
// ---------------------------------------------------------------------------
inline double logcase_ratio(u64 x, const Budget& budget = {}) {
  if (x < 2) throw domain_error("logcase_ratio: x must be >= 2");
  const SumParams p = make_params(2.0, 1.0);
  const CertifiedValue s = s_hybrid(p, x, budget);
  const double xd = static_cast<double>(x);
  return s.as_double() * zeta(2.0).value / (xd * std::log(xd));
}

struct TrendReport {
  std::vector<u64> xs;
  std::vector<double> ratios;
  unsigned improved = 0;   // doublings with |ratio - 1| below the baseline's
  unsigned doublings = 0;
  bool ok = false;
};

inline TrendReport logcase_trend(u64 x0 = 10'000, unsigned doublings = 10, unsigned need = 7,
                                 const Budget& budget = {}) {
  if (x0 < 100) throw domain_error("logcase_trend: baseline x must be >= 100");
  TrendReport rep;
  rep.doublings = doublings;
  u64 x = x0;
  for (unsigned i = 0; i <= doublings; ++i, x *= 2) {
    rep.xs.push_back(x);
    rep.ratios.push_back(logcase_ratio(x, budget));
  }
  const double base = std::abs(rep.ratios.front() - 1.0);
  for (unsigned i = 1; i <= doublings; ++i) {
    if (std::abs(rep.ratios[i] - 1.0) < base) ++rep.improved;
  }
  rep.ok = rep.improved >= need;
  return rep;
}

}  // namespace floorsum
