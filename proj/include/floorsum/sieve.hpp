#pragma once

// Exact multiplicative-function machinery over 64-bit integers:
//   * linear sieves for Euler's totient and the Moebius function,
//   * a windowed totient sieve for intervals [lo, hi],
//   * a single-point totient via deterministic Miller-Rabin and
//     Brent-cycle Pollard rho factorization.
// Everything here is deterministic; retries in the rho loop follow a fixed
// parameter schedule.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "core.hpp"

namespace floorsum {

enum class TableKind { totient, moebius };

// Dense table of f(lo), f(lo+1), ..., f(hi) for one arithmetic function.
struct ArithTable {
  TableKind kind{};
  u64 lo = 1;
  std::vector<i64> values;

  u64 hi() const { return lo + values.size() - 1; }
  i64 at(u64 n) const {
    if (n < lo || n - lo >= values.size()) throw domain_error("ArithTable: index outside window");
    return values[n - lo];
  }
};

namespace detail {

inline void check_sieve_capacity(u64 n, const Budget& budget, const char* who) {
  // values (8n) + composite flags (n/8) + prime list (~8 * 1.3 n / ln n).
  const double nd = static_cast<double>(n);
  const double primes = n < 100 ? 32.0 : 1.3 * nd / std::log(nd);
  const double bytes = 8.0 * nd + nd / 8.0 + 8.0 * primes;
  if (bytes > static_cast<double>(budget.memory_cap_bytes))
    throw capacity_error(std::string(who) + ": table would exceed the memory budget");
}

}  // namespace detail

// Totient table for 1..n by linear sieve: each composite is struck exactly
// once through its least prime factor.
inline ArithTable sieve_phi(u64 n, const Budget& budget = {}) {
  if (n == 0) throw domain_error("sieve_phi: n must be >= 1");
  detail::check_sieve_capacity(n, budget, "sieve_phi");
  ArithTable table{TableKind::totient, 1, std::vector<i64>(n)};
  auto f = [&table](u64 v) -> i64& { return table.values[v - 1]; };
  f(1) = 1;
  std::vector<bool> composite(n + 1, false);
  std::vector<u64> primes;
  for (u64 i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      f(i) = static_cast<i64>(i - 1);
    }
    for (u64 p : primes) {
      if (p > n / i) break;
      composite[i * p] = true;
      if (i % p == 0) {
        f(i * p) = f(i) * static_cast<i64>(p);  // p already divides i
        break;
      }
      f(i * p) = f(i) * static_cast<i64>(p - 1);
    }
  }
  return table;
}

// Moebius table for 1..n, same linear scheme.
inline ArithTable sieve_mu(u64 n, const Budget& budget = {}) {
  if (n == 0) throw domain_error("sieve_mu: n must be >= 1");
  detail::check_sieve_capacity(n, budget, "sieve_mu");
  ArithTable table{TableKind::moebius, 1, std::vector<i64>(n)};
  auto f = [&table](u64 v) -> i64& { return table.values[v - 1]; };
  f(1) = 1;
  std::vector<bool> composite(n + 1, false);
  std::vector<u64> primes;
  for (u64 i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      f(i) = -1;
    }
    for (u64 p : primes) {
      if (p > n / i) break;
      composite[i * p] = true;
      if (i % p == 0) {
        f(i * p) = 0;  // p^2 divides i*p
        break;
      }
      f(i * p) = -f(i);
    }
  }
  return table;
}

// Plain Eratosthenes prime list; helper for the windowed sieve and tests.
inline std::vector<u64> primes_up_to(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 m = i * i; m <= n; m += i) composite[m] = true;
  }
  return out;
}

// Totient over an interval [lo, hi]: start from phi = n, apply every prime
// p <= sqrt(hi) that divides n (the quotient phi/p is integral at that
// moment), then fix up the single prime factor > sqrt(hi) left in n.
inline ArithTable segment_phi(u64 lo, u64 hi, const Budget& budget = {}) {
  if (lo == 0 || hi < lo) throw domain_error("segment_phi: need 1 <= lo <= hi");
  const u64 len = hi - lo + 1;
  const u64 root = isqrt(hi);
  if (16.0 * static_cast<double>(len) + 10.0 * static_cast<double>(root) >
      static_cast<double>(budget.memory_cap_bytes))
    throw capacity_error("segment_phi: window would exceed the memory budget");

  std::vector<u64> rem(len);
  ArithTable table{TableKind::totient, lo, std::vector<i64>(len)};
  for (u64 i = 0; i < len; ++i) {
    rem[i] = lo + i;
    table.values[i] = static_cast<i64>(lo + i);
  }
  for (u64 p : primes_up_to(root)) {
    for (u64 m = (lo + p - 1) / p * p; m <= hi; m += p) {
      const u64 i = m - lo;
      table.values[i] -= table.values[i] / static_cast<i64>(p);
      while (rem[i] % p == 0) rem[i] /= p;
    }
  }
  for (u64 i = 0; i < len; ++i) {
    if (rem[i] > 1)  // leftover prime factor above sqrt(hi)
      table.values[i] -= table.values[i] / static_cast<i64>(rem[i]);
  }
  return table;
}

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u128>(a) * b % m; }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

// Deterministic Miller-Rabin; this witness set is exact for all 64-bit n.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Brent-cycle Pollard rho. Precondition: n is odd, composite, and not a
// perfect power of the polynomial's fixed points; retries walk c = 1, 2, ...
// so the whole procedure is deterministic.
inline u64 pollard_brent(u64 n) {
  assert(n > 3 && (n & 1) != 0);
  for (u64 c = 1;; ++c) {
    auto step = [n, c](u64 v) { return (static_cast<u128>(v) * v + c) % n; };
    u64 x = 2, y = 2, ys = 2, q = 1, g = 1;
    const u64 batch = 128;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      for (u64 k = 0; k < r && g == 1; k += batch) {
        ys = y;
        const u64 lim = std::min(batch, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = step(y);
          q = detail::mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      // Backtrack one step at a time from the last checkpoint.
      g = 1;
      while (g == 1) {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
    // Cycle collapsed onto n itself; retry with the next polynomial.
  }
}

namespace detail {

inline void factor_into(u64 n, std::vector<std::pair<u64, int>>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    for (auto& pe : out) {
      if (pe.first == n) {
        ++pe.second;
        return;
      }
    }
    out.emplace_back(n, 1);
    return;
  }
  const u64 d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

// Totient at a single point, no table required. Exact for all n < 2^63.
inline u64 phi_point(u64 n) {
  if (n == 0) throw domain_error("phi_point: n must be >= 1");
  u64 result = 1;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                31ull, 37ull, 41ull, 43ull, 47ull, 53ull, 59ull, 61ull, 67ull, 71ull,
                73ull, 79ull, 83ull, 89ull, 97ull}) {
    if (n % p == 0) {
      n /= p;
      result *= p - 1;
      while (n % p == 0) {
        n /= p;
        result *= p;
      }
    }
  }
  if (n == 1) return result;
  std::vector<std::pair<u64, int>> rest;
  detail::factor_into(n, rest);
  for (auto [p, e] : rest) {
    result *= p - 1;
    for (int i = 1; i < e; ++i) result *= p;
  }
  return result;
}

}  // namespace floorsum
