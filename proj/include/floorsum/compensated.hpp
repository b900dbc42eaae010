#pragma once

// Neumaier-compensated accumulation with an a-posteriori rounding
// certificate. For compensated summation the accumulated rounding error is
// bounded by (2 eps + O(n eps^2)) times the absolute mass sum |x_i|; on top
// of that each incoming term carries its own evaluation error, supplied by
// the caller as kappa ulps (lookups and one multiply: kappa ~ 4; pow-based
// terms: kappa ~ 8). The certificate folds both together, with slack:
//
//     abs_mass * eps * (kappa + 4 + 3 n eps).
//
// The +4 also absorbs the extra compensated adds a merge() performs.

#include <cmath>
#include <cstdint>
#include <limits>

namespace floorsum {

class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    abs_ += std::abs(x);
    ++count_;
  }

  // Fold another accumulator in. Callers must merge in a fixed order so
  // float results stay reproducible run to run.
  void merge(const NeumaierSum& o) {
    const double s = o.sum_;
    const double c = o.comp_;
    const double a = o.abs_;
    const std::uint64_t n = o.count_;
    add(s);
    add(c);
    // add() above counted s and c as two fresh terms; restore the real
    // bookkeeping (term count and absolute mass of the merged stream).
    count_ = count_ - 2 + n;
    abs_ = abs_ - std::abs(s) - std::abs(c) + a;
  }

  double value() const { return sum_ + comp_; }
  double abs_mass() const { return abs_; }
  std::uint64_t count() const { return count_; }

  double certificate(double kappa) const {
    const double eps = std::numeric_limits<double>::epsilon();
    return abs_ * eps * (kappa + 4.0 + 3.0 * static_cast<double>(count_) * eps);
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
  std::uint64_t count_ = 0;
};

}  // namespace floorsum
