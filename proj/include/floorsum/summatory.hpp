#pragma once

// Sub-linear summatory functions. Writing T(n) = n(n+1)/2, the totient
// prefix sum obeys
//
//     Phi(n) = T(n) - sum_{d=2}^{n} Phi(floor(n/d)),
//
// and the Mertens function obeys M(n) = 1 - sum_{d=2}^{n} M(floor(n/d)).
// Grouping equal quotients makes each evaluation O(sqrt(n)) lookups, and
// evaluating the distinct quotients of the root bottom-up gives ~n^{2/3}
// total work once prefix sums below a ~n^{2/3} threshold come from a sieve.
//
// A cache is built eagerly for one root and is immutable afterwards, so
// concurrent reads are safe. Values are held exactly: prefix sums of phi
// reach ~3e25 at n = 1e13, so the large-quotient table is 128-bit and the
// public accessor widens to BigInt.

#include <vector>

#include "core.hpp"
#include "sieve.hpp"

namespace floorsum {

class SummatoryCache {
 public:
  enum class Kind { totient, mertens };

  SummatoryCache(Kind kind, u64 root, const Budget& budget = {}) : kind_(kind), root_(root) {
    if (root == 0) throw domain_error("SummatoryCache: root must be >= 1");
    threshold_ = pick_threshold(root, budget);
    build_small(budget);
    build_large();
  }

  Kind kind() const { return kind_; }
  u64 root() const { return root_; }
  u64 threshold() const { return threshold_; }

  // Phi at any v that is either <= threshold or a quotient floor(root/i).
  u128 phi_prefix(u64 v) const {
    require(Kind::totient, v);
    if (v <= threshold_) return small_phi_[v];
    return large_phi_[root_ / v];
  }

  // Mertens at the same family of points.
  i64 mu_prefix(u64 v) const {
    require(Kind::mertens, v);
    if (v <= threshold_) return small_mu_[v];
    return large_mu_[root_ / v];
  }

 private:
  static u64 pick_threshold(u64 n, const Budget& budget) {
    u64 t = static_cast<u64>(std::llround(std::pow(static_cast<double>(n), 2.0 / 3.0)));
    t = std::max<u64>({t, isqrt(n), 16});
    t = std::min(t, n);
    // Peak footprint ~ 17 bytes per sieved entry + 16 bytes per large slot.
    const u64 cap_t = budget.memory_cap_bytes / 34;
    if (t > cap_t) t = std::max<u64>({cap_t, isqrt(n), 16});
    const double bytes = 17.0 * static_cast<double>(t) +
                         16.0 * static_cast<double>(n / std::max<u64>(t, 1) + 2);
    if (bytes > static_cast<double>(budget.memory_cap_bytes))
      throw capacity_error("SummatoryCache: tables would exceed the memory budget");
    return t;
  }

  void require(Kind k, u64 v) const {
    if (kind_ != k) throw domain_error("SummatoryCache: wrong table kind for this query");
    if (v == 0 || v > root_) throw domain_error("SummatoryCache: query out of range");
    if (v > threshold_ && root_ / (root_ / v) != v)
      throw domain_error("SummatoryCache: value is not in the cached quotient set");
  }

  void build_small(const Budget& budget) {
    if (kind_ == Kind::totient) {
      ArithTable t = sieve_phi(threshold_, budget);
      small_phi_.resize(threshold_ + 1);
      small_phi_[0] = 0;
      u128 acc = 0;
      for (u64 v = 1; v <= threshold_; ++v) {
        acc += static_cast<u64>(t.at(v));
        small_phi_[v] = acc;  // Phi(threshold) < 2^64 for threshold < 7e9
      }
    } else {
      ArithTable t = sieve_mu(threshold_, budget);
      small_mu_.resize(threshold_ + 1);
      small_mu_[0] = 0;
      i64 acc = 0;
      for (u64 v = 1; v <= threshold_; ++v) {
        acc += t.at(v);
        small_mu_[v] = acc;
      }
    }
  }

  // Distinct quotients floor(root/i) above the threshold, smallest first,
  // each evaluated from already-known smaller values.
  void build_large() {
    const u64 imax = root_ / (threshold_ + 1);
    if (kind_ == Kind::totient) {
      large_phi_.assign(imax + 1, 0);
      for (u64 i = imax; i >= 1; --i) {
        const u64 v = root_ / i;
        u128 r = triangular(v);
        for (u64 d = 2; d <= v;) {
          const u64 q = v / d;
          const u64 hi = v / q;
          const u128 lk = q <= threshold_ ? small_phi_[q] : large_phi_[root_ / q];
          r -= static_cast<u128>(hi - d + 1) * lk;
          d = hi + 1;
        }
        large_phi_[i] = r;
      }
    } else {
      large_mu_.assign(imax + 1, 0);
      for (u64 i = imax; i >= 1; --i) {
        const u64 v = root_ / i;
        i128 r = 1;
        for (u64 d = 2; d <= v;) {
          const u64 q = v / d;
          const u64 hi = v / q;
          const i128 lk = q <= threshold_ ? small_mu_[q] : large_mu_[root_ / q];
          r -= static_cast<i128>(hi - d + 1) * lk;
          d = hi + 1;
        }
        large_mu_[i] = static_cast<i64>(r);
      }
    }
  }

  Kind kind_;
  u64 root_;
  u64 threshold_ = 0;
  std::vector<u64> small_phi_;   // prefix sums of phi, 0..threshold
  std::vector<u128> large_phi_;  // Phi(root/i) indexed by i
  std::vector<i64> small_mu_;
  std::vector<i64> large_mu_;
};

inline BigInt totient_summatory(u64 n, const SummatoryCache& cache) {
  return BigInt(cache.phi_prefix(n));
}

inline BigInt totient_summatory(u64 n, const Budget& budget = {}) {
  SummatoryCache cache(SummatoryCache::Kind::totient, n, budget);
  return BigInt(cache.phi_prefix(n));
}

inline i64 mertens(u64 n, const SummatoryCache& cache) { return cache.mu_prefix(n); }

inline i64 mertens(u64 n, const Budget& budget = {}) {
  SummatoryCache cache(SummatoryCache::Kind::mertens, n, budget);
  return cache.mu_prefix(n);
}

// Phi(n) / (3 n^2 / pi^2); tends to 1, which checks the whole recurrence
// stack against an independent closed-form density.
inline double walfisz_ratio(u64 n, const Budget& budget = {}) {
  if (n == 0) throw domain_error("walfisz_ratio: n must be >= 1");
  SummatoryCache cache(SummatoryCache::Kind::totient, n, budget);
  const double phi_sum = static_cast<double>(cache.phi_prefix(n));
  return phi_sum / (3.0 * static_cast<double>(n) * static_cast<double>(n) / (kPi * kPi));
}

}  // namespace floorsum
