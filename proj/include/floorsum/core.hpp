#pragma once

// Shared scalar types, error taxonomy, and the certified-value carrier used
// throughout the library.

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace floorsum {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kPi = 3.14159265358979323846;

// Argument outside an operation's mathematical domain.
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Work or memory beyond the configured budget (includes linear-work guards).
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A certified computation could not reach the requested error target.
struct precision_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Too few admissible data points survived filtering.
struct insufficient_data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resource knobs threaded through the evaluators. threads == 0 means "use
// whatever the hardware offers".
struct Budget {
  u64 memory_cap_bytes = u64(1) << 33;
  u64 naive_cap = 1'000'000'000;  // ceiling for the linear-time evaluator
  unsigned threads = 0;
};

inline unsigned effective_threads(const Budget& b) {
  if (b.threads != 0) return b.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Exact integer square root: the unique r with r^2 <= n < (r+1)^2.
inline u64 isqrt(u64 n) {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Exact integer cube root.
inline u64 icbrt(u64 n) {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return r;
}

// n(n+1)/2 without intermediate overflow for n < 2^63.
inline u128 triangular(u64 n) {
  return static_cast<u128>(n) * (static_cast<u128>(n) + 1) / 2;
}

inline BigInt big_from_u128(u128 v) { return BigInt(v); }

inline BigInt big_from_i128(i128 v) {
  return v < 0 ? -BigInt(static_cast<u128>(-v)) : BigInt(static_cast<u128>(v));
}

inline std::string format_double17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// A computed quantity plus how trustworthy it is: either an exact integer
// (abs_error == 0) or a double with a rigorous absolute error bound.
struct CertifiedValue {
  bool exact = false;
  BigInt int_value{};      // meaningful iff exact
  double value = 0.0;      // float-mode value; rounded view in exact mode
  double abs_error = 0.0;  // 0 iff exact
  u64 terms = 0;

  static CertifiedValue make_exact(BigInt v, u64 terms) {
    CertifiedValue r;
    r.exact = true;
    r.int_value = std::move(v);
    r.value = r.int_value.convert_to<double>();
    r.abs_error = 0.0;
    r.terms = terms;
    return r;
  }

  static CertifiedValue make_float(double v, double err, u64 terms) {
    CertifiedValue r;
    r.exact = false;
    r.value = v;
    r.abs_error = err;
    r.terms = terms;
    return r;
  }

  double as_double() const { return exact ? int_value.convert_to<double>() : value; }

  // Decimal string in exact mode, 17-significant-digit float otherwise.
  std::string text() const {
    return exact ? int_value.str() : format_double17(value);
  }
};

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace floorsum
