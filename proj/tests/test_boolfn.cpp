#include <cmath>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "tribes/boolfn.hpp"
#include "tribes/error.hpp"

using namespace tribes;

namespace {

TribesFunction tribes_of(std::vector<std::uint32_t> sizes) {
  TribesFunction f;
  f.tribe_sizes = std::move(sizes);
  f.n = f.relevant();
  for (std::size_t q = 0; q < f.n; ++q) f.var_map.push_back(q);
  return f;
}

TruthTable dictator(unsigned vars) {
  TruthTable tt(vars);
  for (std::uint64_t b = 0; b < tt.size(); ++b) tt.set(b, (b & 1u) != 0);
  return tt;
}

}  // namespace

TEST_SUITE("boolfn") {

TEST_CASE("truth table of a single AND") {
  const TruthTable tt = tribes_truth_table(tribes_of({2}));
  REQUIRE(tt.vars() == 2);
  CHECK(!tt.get(0));
  CHECK(!tt.get(1));
  CHECK(!tt.get(2));
  CHECK(tt.get(3));
}

TEST_CASE("truth table of (x1 & x2) | (x3 & x4)") {
  const auto oracle_table = oracle::brute_table({2, 2});
  REQUIRE(oracle_table.size() == 16);
  REQUIRE(oracle::count_ones(oracle_table) == 7);

  const TruthTable tt = tribes_truth_table(tribes_of({2, 2}));
  CHECK(tt.size() == 16);
  std::uint64_t ones = 0;
  for (std::uint64_t b = 0; b < 16; ++b) {
    CHECK(tt.get(b) == oracle_table[b]);
    ones += tt.get(b);
  }
  CHECK(ones == 7);
}

TEST_CASE("capacity") {
  CHECK_THROWS_AS(tribes_truth_table(tribes_of({13, 13}), 24), CapacityExceeded);
  CHECK_NOTHROW(tribes_truth_table(tribes_of({13, 13}), 26));
  CHECK_THROWS_AS(tribes_truth_table(tribes_of({3}), 2), CapacityExceeded);
}

TEST_CASE("evaluate") {
  const TribesFunction two_two = tribes_of({2, 2});
  CHECK(evaluate(two_two, Assignment{1, 1, 0, 0}));
  CHECK_FALSE(evaluate(two_two, Assignment{1, 0, 0, 1}));
  CHECK(evaluate(two_two, Assignment{0, 0, 1, 1}));
  CHECK(evaluate(tribes_of({3}), Assignment{1, 1, 1}));
  CHECK_FALSE(evaluate(tribes_of({3}), Assignment{1, 1, 0}));
  CHECK_THROWS_AS(evaluate(two_two, Assignment{1, 1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Assignment({0, 2}), std::invalid_argument);
}

TEST_CASE("expectation") {
  CHECK(expectation(TruthTable(3)).is_zero());
  CHECK(expectation(tribes_truth_table(tribes_of({2}))) == Dyadic::pow2_neg(2));

  const mpq_class seven_sixteenths = oracle::fraction(oracle::count_ones(oracle::brute_table({2, 2})), 4);
  REQUIRE(seven_sixteenths == mpq_class(7, 16));
  CHECK(expectation(tribes_truth_table(tribes_of({2, 2}))) == Dyadic(mpz_class(7), 4));
}

TEST_CASE("influence") {
  const TruthTable dict = dictator(2);
  CHECK(influence(dict, 0) == Dyadic(1));
  CHECK(influence(dict, 1).is_zero());

  const auto and2 = oracle::brute_table({2});
  REQUIRE(oracle::fraction(oracle::count_flips(and2, 0), 2) == mpq_class(1, 2));
  CHECK(influence(tribes_truth_table(tribes_of({2})), 0) == Dyadic::pow2_neg(1));

  const auto two_two = oracle::brute_table({2, 2});
  REQUIRE(oracle::fraction(oracle::count_flips(two_two, 0), 4) == mpq_class(3, 8));
  CHECK(influence(tribes_truth_table(tribes_of({2, 2})), 0) == Dyadic(mpz_class(3), 3));

  CHECK_THROWS_AS(influence(dict, 2), std::invalid_argument);
  CHECK_THROWS_AS(influence(TruthTable(0), 0), std::invalid_argument);
}

TEST_CASE("variance") {
  CHECK(variance(TruthTable(4)).is_zero());
  CHECK(variance(dictator(3)) == Dyadic::pow2_neg(2));
  // (7/16)(9/16) computed with plain rationals.
  REQUIRE(mpq_class(7, 16) * mpq_class(9, 16) == mpq_class(63, 256));
  CHECK(variance(tribes_truth_table(tribes_of({2, 2}))) == Dyadic(mpz_class(63), 8));
}

TEST_CASE("monotonicity detector") {
  CHECK(is_monotone(dictator(3)));
  TruthTable negated(2);
  negated.set(0, true);
  CHECK_FALSE(is_monotone(negated));
  TruthTable wide(9);
  wide.set(0, true);  // f(0..0) = 1 but f(e_j) = 0 for every j
  CHECK_FALSE(is_monotone(wide));
}

TEST_CASE("sampled influence") {
  const TribesFunction dict = tribes_of({1});
  const SampledEstimate always = influence_sampled(dict, 0, 1000, 123);
  CHECK(always.estimate == 1.0);
  CHECK(always.std_error == 0.0);

  TribesFunction padded = tribes_of({2, 2});
  padded.n = 6;
  const SampledEstimate idle = influence_sampled(padded, 5, 1000, 1);
  CHECK(idle.estimate == 0.0);
  CHECK_THROWS_AS(influence_sampled(padded, 6, 1000, 1), std::invalid_argument);
  CHECK_THROWS_AS(influence_sampled(padded, 0, 0, 1), std::invalid_argument);

  const SampledEstimate est = influence_sampled(tribes_of({2, 2}), 0, 1'000'000, 42);
  CHECK(std::abs(est.estimate - 0.375) < 0.005);
  CHECK(est.std_error == doctest::Approx(std::sqrt(est.estimate * (1 - est.estimate) / 1e6)));

  CHECK(influence_sampled(tribes_of({2, 2}), 0, 5000, 42) ==
        influence_sampled(tribes_of({2, 2}), 0, 5000, 42));
  CHECK(influence_sampled(tribes_of({2, 2}), 0, 5000, 42) !=
        influence_sampled(tribes_of({2, 2}), 0, 5000, 43));

  const SampledEstimate e = expectation_sampled(tribes_of({2, 2}), 200'000, 9);
  CHECK(std::abs(e.estimate - 7.0 / 16.0) < 5 * std::sqrt(63.0 / 256.0 / 200'000));
}

TEST_CASE("property: truth-table values match the rational formulas") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::uint32_t> size_dist(1, 7);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<std::uint32_t> sizes;
    unsigned t = 0;
    for (;;) {
      const std::uint32_t k = size_dist(rng);
      if (t + k > 20) break;
      sizes.push_back(k);
      t += k;
      if (rng() % 3 == 0) break;
    }
    const TribesFunction f = tribes_of(sizes);
    const TruthTable tt = tribes_truth_table(f);
    REQUIRE(oracle::same_value(expectation(tt), oracle::tribes_expectation(sizes)));
    REQUIRE(is_monotone(tt));

    unsigned position = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const Dyadic first = influence(tt, position);
      REQUIRE(oracle::same_value(first, oracle::tribes_influence(sizes, i)));
      for (std::uint32_t k = 0; k < sizes[i]; ++k, ++position) {
        const Dyadic inf = influence(tt, position);
        REQUIRE(inf == first);
        // Flips come in pairs, so the count is even.
        if (!inf.is_zero()) REQUIRE(inf.exponent() + 1 <= t);
      }
    }

    if (t <= 12) {
      const auto brute = oracle::brute_table(sizes);
      for (std::uint64_t b = 0; b < brute.size(); ++b) REQUIRE(tt.get(b) == brute[b]);
    }
  }
}

}  // TEST_SUITE
