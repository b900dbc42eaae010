#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "floorsum/blocks.hpp"
#include "floorsum/sums.hpp"
#include "test_oracles.hpp"

using namespace floorsum;

TEST_CASE("floor blocks for x = 10 are exactly the known five runs", "[blocks]") {
  const auto blocks = floor_blocks(10);
  REQUIRE(blocks.size() == 5);
  const FloorBlock expected[] = {{10, 1, 1}, {5, 2, 2}, {3, 3, 3}, {2, 4, 5}, {1, 6, 10}};
  for (size_t i = 0; i < 5; ++i) {
    CHECK(blocks[i].quotient == expected[i].quotient);
    CHECK(blocks[i].n_lo == expected[i].n_lo);
    CHECK(blocks[i].n_hi == expected[i].n_hi);
  }
}

TEST_CASE("floor blocks for x = 4", "[blocks]") {
  const auto blocks = floor_blocks(4);
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0].quotient == 4);
  CHECK(blocks[1].quotient == 2);
  CHECK(blocks[2].quotient == 1);
  CHECK(blocks[2].n_lo == 3);
  CHECK(blocks[2].n_hi == 4);
}

TEST_CASE("blocks partition [1, x] with constant quotient on each run", "[blocks]") {
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> logx(std::log(2.0), std::log(1e12));
  for (int trial = 0; trial < 500; ++trial) {
    const u64 x = static_cast<u64>(std::exp(logx(rng)));
    u64 expect_next = 1;
    u64 count = 0;
    for_each_floor_block(x, [&](u64 q, u64 lo, u64 hi) {
      // Assert lazily: a plain branch per block keeps half a million runs
      // cheap, and FAIL carries the context when something breaks.
      const bool run_ok = lo == expect_next && lo <= hi && x / lo == q && x / hi == q &&
                          (hi >= x || x / (hi + 1) < q);
      if (!run_ok) FAIL("bad run at x=" << x << " lo=" << lo << " hi=" << hi << " q=" << q);
      expect_next = hi + 1;
      ++count;
    });
    REQUIRE(expect_next == x + 1);
    // Classical bound on the number of distinct quotients.
    REQUIRE(count <= 2 * isqrt(x) + 1);
  }
  CHECK_THROWS_AS(floor_blocks(0), domain_error);
}

TEST_CASE("parameter validation and reduction", "[sums]") {
  CHECK_THROWS_AS(make_params(0.5, 0.0), domain_error);
  CHECK_THROWS_AS(make_params(1.0, -0.25), domain_error);

  const SumParams p = make_params(1.5, 0.5);
  CHECK(p.c == 1.0);
  CHECK(p.exact);  // only c = j - k decides the mode

  CHECK_FALSE(make_params(1.0, 1.0).exact);   // c = 0
  CHECK_FALSE(make_params(1.0, 2.5).exact);   // c negative non-integer
  CHECK(make_params(3.0, 1.0).exact);
}

TEST_CASE("frozen sums at x = 10", "[sums]") {
  // S(10) for c = 0 is 118/15.
  const CertifiedValue v11 = s_block(make_params(1, 1), 10);
  CHECK_FALSE(v11.exact);
  CHECK(v11.value == Catch::Approx(118.0 / 15.0).epsilon(1e-14));
  CHECK(std::abs(v11.value - 118.0 / 15.0) <= v11.abs_error);

  CHECK(s_block(make_params(2, 1), 10).int_value == 17);
  CHECK(s_block(make_params(3, 1), 10).int_value == 75);
  // Only c matters: (2,0) and (3,1) share c = 2.
  CHECK(s_block(make_params(2, 0), 10).int_value == 75);
}

TEST_CASE("reduced form equals the literal definition", "[sums]") {
  for (u64 x = 1; x <= 30; ++x) {
    INFO("x = " << x);
    REQUIRE(s_naive(make_params(2, 1), x).int_value == BigInt(oracle::s_literal_direct(x, 2, 1)));
    REQUIRE(s_naive(make_params(3, 1), x).int_value == BigInt(oracle::s_literal_direct(x, 3, 1)));
    REQUIRE(s_naive(make_params(3, 2), x).int_value == BigInt(oracle::s_literal_direct(x, 3, 2)));
  }
}

TEST_CASE("three evaluators agree against the gcd oracle", "[sums]") {
  const SumParams p = make_params(2, 1);  // c = j - k = 1
  for (u64 x = 1; x <= 300; ++x) {
    const BigInt expect(oracle::s_reduced_direct(x, 1));
    INFO("x = " << x);
    REQUIRE(s_naive(p, x).int_value == expect);
    REQUIRE(s_block(p, x).int_value == expect);
    REQUIRE(s_hybrid(p, x).int_value == expect);
  }
}

TEST_CASE("float mode stays within its certificate of the direct sum", "[sums]") {
  const SumParams p = make_params(1, 1.5);  // c = -0.5
  for (u64 x : {u64(1), u64(7), u64(100), u64(999)}) {
    const double expect = oracle::s_reduced_float(x, -0.5);
    for (const CertifiedValue& v : {s_naive(p, x), s_block(p, x), s_hybrid(p, x)}) {
      INFO("x = " << x);
      CHECK_FALSE(v.exact);
      // The oracle itself rounds, so allow both certificates' worth.
      REQUIRE(std::abs(v.value - expect) <= v.abs_error + 1e-11);
    }
  }
}

TEST_CASE("wide exponents switch to big-integer accumulation", "[sums]") {
  // c = 14 at x = 1000: the leading term alone is phi(1000) 1000^13 =
  // 4 * 10^41, beyond any 128-bit accumulator.
  const SumParams p = make_params(15, 1);
  const CertifiedValue v = s_block(p, 1000);
  REQUIRE(v.exact);
  CHECK(v.int_value > BigInt("400000000000000000000000000000000000000000"));  // 4 * 10^41
  CHECK(s_hybrid(p, 1000).int_value == v.int_value);
  CHECK(s_naive(p, 1000).int_value == v.int_value);
  // Hand value at the same exponent: x = 2 has terms phi(2) 2^13 = 8192
  // and phi(1) 1^13 = 1.
  CHECK(s_block(p, 2).int_value == 8193);
}

TEST_CASE("sum of floor powers, frozen and monotone", "[sums]") {
  CHECK(sum_of_floor_powers(10, 0).int_value == 10);
  CHECK(sum_of_floor_powers(10, 1).int_value == 27);
  CHECK(sum_of_floor_powers(10, 2).int_value == 147);
  CHECK(sum_of_floor_powers(10, 3).int_value == 1173);
  // Monotone in x for fixed c (every quotient weakly grows with x).
  BigInt prev = 0;
  for (u64 x = 1; x <= 200; ++x) {
    const BigInt cur = sum_of_floor_powers(x, 2).int_value;
    REQUIRE(cur > prev);
    prev = cur;
  }
  CHECK_THROWS_AS(sum_of_floor_powers(0, 2), domain_error);
  CHECK_THROWS_AS(sum_of_floor_powers(10, -1.0), domain_error);
}

TEST_CASE("naive evaluator honors the linear-work guard", "[sums][capacity]") {
  Budget b;
  b.naive_cap = 1000;
  CHECK_THROWS_AS(s_naive(make_params(2, 1), 1001, b), capacity_error);
  CHECK(s_naive(make_params(2, 1), 1000, b).exact);
  CHECK_THROWS_AS(s_naive(make_params(2, 1), 0), domain_error);
  CHECK_THROWS_AS(s_block(make_params(2, 1), 0), domain_error);
  CHECK_THROWS_AS(s_hybrid(make_params(2, 1), 0), domain_error);
}

TEST_CASE("explicit thread counts do not change exact results", "[sums][threads]") {
  const SumParams p = make_params(2, 1);
  Budget one;
  one.threads = 1;
  Budget four;
  four.threads = 4;
  const u64 x = 12'345'678;
  const CertifiedValue a = s_hybrid(p, x, one);
  const CertifiedValue b = s_hybrid(p, x, four);
  REQUIRE(a.int_value == b.int_value);

  // Float mode: chunked reduction is merged in fixed chunk order, so equal
  // thread counts reproduce bit-identical values.
  const SumParams pf = make_params(1, 1);
  const CertifiedValue f1 = s_hybrid(pf, x, four);
  const CertifiedValue f2 = s_hybrid(pf, x, four);
  CHECK(f1.value == f2.value);
  const CertifiedValue g1 = s_hybrid(pf, x, one);
  CHECK(std::abs(f1.value - g1.value) <= f1.abs_error + g1.abs_error);
}
