#pragma once

// The floor-quotient totient sums. With m = floor(x/n) every summand
// phi(m^j) / m^k collapses, via phi(m^j) = m^{j-1} phi(m), to
//
//     v(m) = phi(m) * m^{c-1},   c = j - k,
//
// and that reduced form is taken as the definition for non-integer j as
// well. Only c matters to the evaluators.
//
// Mode rule: when c is an integer >= 1 every summand is a positive integer
// and the sum is carried exactly (128-bit fast path when a proven bound
// fits, arbitrary precision otherwise). All other parameters run in double
// with compensated summation and a rounding certificate.
//
// Three independent evaluation strategies are kept deliberately separate so
// they can cross-check one another:
//   s_naive   linear scan, one table lookup per n;
//   s_block   one term per constant-quotient run, full table;
//   s_hybrid  point evaluations of phi for n <= sqrt(x) plus runs for the
//             small quotients, so memory stays O(sqrt(x)).

#include <thread>
#include <vector>

#include "blocks.hpp"
#include "compensated.hpp"
#include "core.hpp"
#include "sieve.hpp"

namespace floorsum {

struct SumParams {
  double j = 1.0;
  double k = 0.0;
  double c = 1.0;  // j - k
  bool c_integral = false;
  i64 c_int = 0;  // valid iff c_integral
  bool exact = false;
};

inline SumParams make_params(double j, double k) {
  if (!std::isfinite(j) || !(j >= 1.0)) throw domain_error("params: j must be a finite real >= 1");
  if (!std::isfinite(k) || !(k >= 0.0)) throw domain_error("params: k must be a finite real >= 0");
  SumParams p;
  p.j = j;
  p.k = k;
  p.c = j - k;
  const double r = std::nearbyint(p.c);
  if (p.c == r && std::abs(r) < 9.0e18) {
    p.c_integral = true;
    p.c_int = static_cast<i64>(r);
  }
  p.exact = p.c_integral && p.c_int >= 1;
  return p;
}

namespace detail {

enum class Route { exact_u128, exact_big, floating };

// The whole sum is bounded by x * max_m v(m) <= x^{c+1}; use the 128-bit
// accumulator only when that bound is provably inside.
inline Route pick_route(bool exact, double c, u64 x) {
  if (!exact) return Route::floating;
  const double bits = (c + 1.0) * std::log2(static_cast<double>(x) + 1.0);
  return bits <= 120.0 ? Route::exact_u128 : Route::exact_big;
}

inline u128 ipow_u128(u64 base, i64 e) {
  u128 r = 1, b = base;
  for (; e > 0; e >>= 1) {
    if (e & 1) r *= b;
    if (e > 1) b *= b;
  }
  return r;
}

inline BigInt ipow_big(u64 base, i64 e) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(e));
}

// m^e in double, with short integer exponents multiplied out exactly.
inline double fpow(u64 m, double e, bool integral, i64 ei) {
  if (integral && ei >= -4 && ei <= 4) {
    double r = 1.0;
    const double b = static_cast<double>(m);
    for (i64 i = 0; i < (ei < 0 ? -ei : ei); ++i) r *= b;
    return ei < 0 ? 1.0 / r : r;
  }
  return std::pow(static_cast<double>(m), e);
}

constexpr double kSumTermUlps = 8.0;  // per-term evaluation + compensation

// Chunked deterministic reduction over n in [1, K]: partials are produced
// per contiguous chunk and merged in chunk order.
template <class Partial, class Fill>
inline void run_pointwise(u64 K, unsigned threads, Partial& into, Fill fill) {
  const unsigned nt =
      static_cast<unsigned>(std::min<u64>(threads, std::max<u64>(1, K / 1024)));
  if (nt <= 1) {
    fill(1, K, into);
    return;
  }
  std::vector<Partial> parts(nt);
  std::vector<std::thread> pool;
  const u64 span = K / nt;
  for (unsigned w = 0; w < nt; ++w) {
    const u64 lo = 1 + span * w;
    const u64 hi = (w + 1 == nt) ? K : span * (w + 1);
    pool.emplace_back([&, lo, hi, w] { fill(lo, hi, parts[w]); });
  }
  for (auto& t : pool) t.join();
  for (auto& part : parts) into.merge(part);
}

struct U128Part {
  u128 total = 0;
  void merge(const U128Part& o) { total += o.total; }
};

struct BigPart {
  BigInt total = 0;
  void merge(const BigPart& o) { total += o.total; }
};

struct FloatPart {
  NeumaierSum acc;
  void merge(const FloatPart& o) { acc.merge(o.acc); }
};

}  // namespace detail

// Literal definition: one lookup per n. Linear time and memory, guarded.
inline CertifiedValue s_naive(const SumParams& p, u64 x, const Budget& budget = {}) {
  if (x == 0) throw domain_error("s_naive: x must be >= 1");
  if (x > budget.naive_cap) throw capacity_error("s_naive: x exceeds the linear-work guard");
  const ArithTable phi = sieve_phi(x, budget);
  switch (detail::pick_route(p.exact, p.c, x)) {
    case detail::Route::exact_u128: {
      u128 acc = 0;
      for (u64 n = 1; n <= x; ++n) {
        const u64 m = x / n;
        acc += static_cast<u128>(static_cast<u64>(phi.at(m))) * detail::ipow_u128(m, p.c_int - 1);
      }
      return CertifiedValue::make_exact(BigInt(acc), x);
    }
    case detail::Route::exact_big: {
      BigInt acc = 0;
      for (u64 n = 1; n <= x; ++n) {
        const u64 m = x / n;
        acc += BigInt(static_cast<u64>(phi.at(m))) * detail::ipow_big(m, p.c_int - 1);
      }
      return CertifiedValue::make_exact(acc, x);
    }
    default: {
      NeumaierSum acc;
      for (u64 n = 1; n <= x; ++n) {
        const u64 m = x / n;
        acc.add(static_cast<double>(phi.at(m)) * detail::fpow(m, p.c - 1.0, p.c_integral, p.c_int - 1));
      }
      return CertifiedValue::make_float(acc.value(), acc.certificate(detail::kSumTermUlps), x);
    }
  }
}

// One term per constant-quotient run; still sieves the full range.
inline CertifiedValue s_block(const SumParams& p, u64 x, const Budget& budget = {}) {
  if (x == 0) throw domain_error("s_block: x must be >= 1");
  const ArithTable phi = sieve_phi(x, budget);
  u64 terms = 0;
  switch (detail::pick_route(p.exact, p.c, x)) {
    case detail::Route::exact_u128: {
      u128 acc = 0;
      for_each_floor_block(x, [&](u64 m, u64 lo, u64 hi) {
        acc += static_cast<u128>(hi - lo + 1) *
               (static_cast<u128>(static_cast<u64>(phi.at(m))) * detail::ipow_u128(m, p.c_int - 1));
        ++terms;
      });
      return CertifiedValue::make_exact(BigInt(acc), terms);
    }
    case detail::Route::exact_big: {
      BigInt acc = 0;
      for_each_floor_block(x, [&](u64 m, u64 lo, u64 hi) {
        acc += BigInt(hi - lo + 1) * BigInt(static_cast<u64>(phi.at(m))) *
               detail::ipow_big(m, p.c_int - 1);
        ++terms;
      });
      return CertifiedValue::make_exact(acc, terms);
    }
    default: {
      NeumaierSum acc;
      for_each_floor_block(x, [&](u64 m, u64 lo, u64 hi) {
        acc.add(static_cast<double>(hi - lo + 1) * static_cast<double>(phi.at(m)) *
                detail::fpow(m, p.c - 1.0, p.c_integral, p.c_int - 1));
        ++terms;
      });
      return CertifiedValue::make_float(acc.value(), acc.certificate(detail::kSumTermUlps), terms);
    }
  }
}

// Split evaluation in O(sqrt(x)) memory: quotients m = floor(x/n) for
// n <= K = floor(sqrt(x)) are handled pointwise (phi via factorization),
// and every n > K falls in a run of some quotient m <= floor(x/(K+1)),
// covered by a small sieve. The two index sets partition [1, x]: n <= K
// forces floor(x/n) >= floor(x/K) > floor(x/(K+1)).
inline CertifiedValue s_hybrid(const SumParams& p, u64 x, const Budget& budget = {}) {
  if (x == 0) throw domain_error("s_hybrid: x must be >= 1");
  const u64 K = isqrt(x);
  const u64 M = x / (K + 1);
  const ArithTable phi = M > 0 ? sieve_phi(M, budget) : ArithTable{TableKind::totient, 1, {}};
  const unsigned threads = effective_threads(budget);
  const u64 terms = K + M;

  switch (detail::pick_route(p.exact, p.c, x)) {
    case detail::Route::exact_u128: {
      detail::U128Part sum;
      detail::run_pointwise(K, threads, sum, [&](u64 lo, u64 hi, detail::U128Part& part) {
        for (u64 n = lo; n <= hi; ++n) {
          const u64 m = x / n;
          part.total += static_cast<u128>(phi_point(m)) * detail::ipow_u128(m, p.c_int - 1);
        }
      });
      for (u64 m = 1; m <= M; ++m) {
        sum.total += static_cast<u128>(x / m - x / (m + 1)) *
                     (static_cast<u128>(static_cast<u64>(phi.at(m))) *
                      detail::ipow_u128(m, p.c_int - 1));
      }
      return CertifiedValue::make_exact(BigInt(sum.total), terms);
    }
    case detail::Route::exact_big: {
      detail::BigPart sum;
      detail::run_pointwise(K, threads, sum, [&](u64 lo, u64 hi, detail::BigPart& part) {
        for (u64 n = lo; n <= hi; ++n) {
          const u64 m = x / n;
          part.total += BigInt(phi_point(m)) * detail::ipow_big(m, p.c_int - 1);
        }
      });
      for (u64 m = 1; m <= M; ++m) {
        sum.total += BigInt(x / m - x / (m + 1)) * BigInt(static_cast<u64>(phi.at(m))) *
                     detail::ipow_big(m, p.c_int - 1);
      }
      return CertifiedValue::make_exact(sum.total, terms);
    }
    default: {
      detail::FloatPart sum;
      detail::run_pointwise(K, threads, sum, [&](u64 lo, u64 hi, detail::FloatPart& part) {
        for (u64 n = lo; n <= hi; ++n) {
          const u64 m = x / n;
          part.acc.add(static_cast<double>(phi_point(m)) *
                       detail::fpow(m, p.c - 1.0, p.c_integral, p.c_int - 1));
        }
      });
      for (u64 m = 1; m <= M; ++m) {
        sum.acc.add(static_cast<double>(x / m - x / (m + 1)) * static_cast<double>(phi.at(m)) *
                    detail::fpow(m, p.c - 1.0, p.c_integral, p.c_int - 1));
      }
      return CertifiedValue::make_float(sum.acc.value(), sum.acc.certificate(detail::kSumTermUlps),
                                        terms);
    }
  }
}

// sum_{n <= x} floor(x/n)^c, by runs. Exact for integer c >= 0.
inline CertifiedValue sum_of_floor_powers(u64 x, double c, const Budget& budget = {}) {
  (void)budget;
  if (x == 0) throw domain_error("sum_of_floor_powers: x must be >= 1");
  if (!std::isfinite(c) || c < 0.0) throw domain_error("sum_of_floor_powers: c must be >= 0");
  const double r = std::nearbyint(c);
  const bool integral = (c == r);
  const i64 ci = integral ? static_cast<i64>(r) : 0;
  u64 terms = 0;
  switch (detail::pick_route(integral, c, x)) {
    case detail::Route::exact_u128: {
      u128 acc = 0;
      for_each_floor_block(x, [&](u64 m, u64 lo, u64 hi) {
        acc += static_cast<u128>(hi - lo + 1) * detail::ipow_u128(m, ci);
        ++terms;
      });
      return CertifiedValue::make_exact(BigInt(acc), terms);
    }
    case detail::Route::exact_big: {
      BigInt acc = 0;
      for_each_floor_block(x, [&](u64 m, u64 lo, u64 hi) {
        acc += BigInt(hi - lo + 1) * detail::ipow_big(m, ci);
        ++terms;
      });
      return CertifiedValue::make_exact(acc, terms);
    }
    default: {
      NeumaierSum acc;
      for_each_floor_block(x, [&](u64 m, u64 lo, u64 hi) {
        acc.add(static_cast<double>(hi - lo + 1) * detail::fpow(m, c, integral, ci));
        ++terms;
      });
      return CertifiedValue::make_float(acc.value(), acc.certificate(detail::kSumTermUlps), terms);
    }
  }
}

}  // namespace floorsum
