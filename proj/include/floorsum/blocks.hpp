#pragma once

// Decomposition of [1, x] into the maximal runs on which n -> floor(x/n) is
// constant. There are at most 2*sqrt(x) + 2 runs, visited in decreasing
// quotient order; run ends come from the involution hi = floor(x / q).

#include <vector>

#include "core.hpp"

namespace floorsum {

struct FloorBlock {
  u64 quotient;  // common value of floor(x/n) on the run
  u64 n_lo;
  u64 n_hi;
};

template <class F>
inline void for_each_floor_block(u64 x, F&& f) {
  for (u64 n = 1; n <= x;) {
    const u64 q = x / n;
    const u64 hi = x / q;
    f(q, n, hi);
    n = hi + 1;
  }
}

inline std::vector<FloorBlock> floor_blocks(u64 x) {
  if (x == 0) throw domain_error("floor_blocks: x must be >= 1");
  std::vector<FloorBlock> out;
  out.reserve(2 * isqrt(x) + 2);
  for_each_floor_block(x, [&out](u64 q, u64 lo, u64 hi) { out.push_back({q, lo, hi}); });
  return out;
}

}  // namespace floorsum
