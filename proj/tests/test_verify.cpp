#include <cmath>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "tribes/error.hpp"
#include "tribes/verify.hpp"

using namespace tribes;

namespace {

BoundSequence bounds(std::vector<std::string> text) {
  return BoundSequence::from_decimal_strings(text);
}

Rational dec(const char* s) { return Rational::parse_decimal(s); }

ConstructionReport two_by_two() {
  return construct(bounds({"1", "1", "1", "1"}), dec("0.3"));
}

void require_same(const VerificationReport& a, const VerificationReport& b) {
  const auto same_q = [](const QuantityMatch& x, const QuantityMatch& y) {
    return x.quantity == y.quantity && x.analytic == y.analytic && x.estimate == y.estimate &&
           x.std_error == y.std_error && x.z == y.z && x.match == y.match;
  };
  REQUIRE(same_q(a.expectation, b.expectation));
  REQUIRE(a.influences.size() == b.influences.size());
  for (std::size_t i = 0; i < a.influences.size(); ++i) {
    REQUIRE(same_q(a.influences[i], b.influences[i]));
  }
}

// Random feasible instances whose relevant variable count fits `cap`.
std::vector<ConstructionReport> small_reports(std::size_t count, unsigned cap,
                                              std::uint64_t seed) {
  oracle::InstanceGenerator gen(seed);
  std::vector<ConstructionReport> out;
  while (out.size() < count) {
    const BoundSequence b = BoundSequence::from_decimal_strings(gen.bounds());
    const AnalysisSummary s = analyze(b);
    if (!s.feasible) continue;
    const std::string mu = gen.mu(s.mu_max - 1e-6);
    if (mu.empty()) continue;
    ConstructionReport r = construct(b, Rational::parse_decimal(mu));
    if (r.function.relevant() <= cap) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("exhaustive verification of the 2x2 tribes") {
  const ConstructionReport r = two_by_two();
  REQUIRE(r.function.tribe_sizes == std::vector<std::uint32_t>{2, 2});
  const VerificationReport v = verify_exact(r.function, r);
  CHECK(v.mode == VerifyMode::exhaustive);
  CHECK(v.passed());
  CHECK(*v.expectation.oracle == Dyadic(mpz_class(7), 4));
  CHECK(v.influences.size() == 4);
  for (const auto& q : v.influences) {
    CHECK(q.match);
    CHECK(*q.oracle == Dyadic(mpz_class(3), 3));
  }
  CHECK(v.checks.size() == 5);
}

TEST_CASE("exhaustive verification catches a tampered expectation") {
  ConstructionReport r = two_by_two();
  r.expectation = Dyadic::pow2_neg(1);
  CHECK_THROWS_WITH_AS(verify_exact(r.function, r), doctest::Contains("expectation"),
                       VerificationFailure);
}

TEST_CASE("exhaustive verification catches a tampered irrelevant variable") {
  ConstructionReport r = construct(bounds({"1", "1", "1", "1"}), dec("0.25"));
  r.influences[3] = Dyadic::pow2_neg(8);
  CHECK_THROWS_AS(verify_exact(r.function, r), VerificationFailure);
}

TEST_CASE("exhaustive verification respects the cap") {
  const ConstructionReport r =
      construct(bounds(std::vector<std::string>(30, "1")), dec("0.985"));
  REQUIRE(r.function.relevant() == 30);
  CHECK_THROWS_AS(verify_exact(r.function, r, 24), CapacityExceeded);
}

TEST_CASE("sampled verification") {
  const ConstructionReport r = two_by_two();
  const VerificationReport v = verify_sampled(r.function, r, 1'000'000, 42, 4.0);
  CHECK(v.mode == VerifyMode::sampled);
  CHECK(v.passed());
  CHECK(std::abs(v.expectation.estimate - 7.0 / 16.0) < 0.005);
  REQUIRE(v.influences.size() == 2);
  for (const auto& q : v.influences) {
    CHECK(std::abs(q.estimate - 0.375) < 0.005);
    CHECK(std::abs(q.z) <= 4.0);
  }

  ConstructionReport tampered = r;
  tampered.influences[0] = Dyadic(mpz_class(115), 7);  // about 0.9
  const VerificationReport bad = verify_sampled(tampered.function, tampered, 100'000, 42, 5.0);
  CHECK_FALSE(bad.passed());
  CHECK_FALSE(bad.influences[0].match);
  CHECK(std::abs(bad.influences[0].z) > 100);

  require_same(verify_sampled(r.function, r, 20'000, 7), verify_sampled(r.function, r, 20'000, 7));
  CHECK_THROWS_AS(verify_sampled(r.function, r, 999, 7), std::invalid_argument);
}

TEST_CASE("sampled verification beyond the truth-table cap") {
  const ConstructionReport r =
      construct(bounds(std::vector<std::string>(30, "1")), dec("0.985"));
  const VerificationReport v = verify_sampled(r.function, r, 200'000, 3);
  CHECK(v.passed());
  CHECK(v.influences.size() == 15);
}

TEST_CASE("check_theorem") {
  const BoundSequence four = bounds({"1", "1", "1", "1"});
  const ConstructionReport a = construct(four, dec("0.25"));
  const auto checks = check_theorem(a, four, dec("0.25"));
  REQUIRE(checks.size() == 5);
  for (const auto& c : checks) CHECK_MESSAGE(c.pass, c.name);
  CHECK(checks[0].name == check_names::kExpectationLower);
  CHECK(*checks[0].exact_margin == Rational(0));

  // Dictator f = x_1 against budget a_1 = 1: Inf = 1 is not strictly below.
  ConstructionReport dict;
  dict.bounds = bounds({"1"});
  dict.mu = dec("0.5");
  dict.partition.n = 1;
  dict.m_star = 0;
  dict.expectation = Dyadic::pow2_neg(1);
  dict.influences = {Dyadic(1)};
  const auto dict_checks = check_theorem(dict, dict.bounds, dict.mu);
  for (const auto& c : dict_checks) {
    if (c.name == std::string(check_names::kInfluenceStrict)) {
      CHECK_FALSE(c.pass);
      CHECK(*c.exact_margin == Rational(0));
    }
    // m = 0 and alpha < 0: the empty sum clears a negative bound.
    if (c.name == std::string(check_names::kClaim1)) CHECK(c.pass);
  }
}

TEST_CASE("property: every +-2^-s tampering is caught exhaustively") {
  std::mt19937_64 rng(53);
  for (const ConstructionReport& r : small_reports(60, 16, 59)) {
    const Dyadic step = Dyadic::pow2_neg(static_cast<long>(std::max<std::size_t>(r.function.relevant(), 1)));
    for (int fault = 0; fault < 4; ++fault) {
      ConstructionReport t = r;
      const bool up = (rng() & 1u) != 0;
      const std::size_t target = rng() % (t.influences.size() + 1);
      Dyadic& value = target == t.influences.size() ? t.expectation : t.influences[target];
      value = (up || value.is_zero()) ? value + step : value - step;
      REQUIRE_THROWS_AS(verify_exact(t.function, t), VerificationFailure);
    }
  }
}

TEST_CASE("property: analytic values equal truth-table values") {
  for (const ConstructionReport& r : small_reports(300, 20, 61)) {
    const VerificationReport v = verify_exact(r.function, r);
    REQUIRE(v.passed());
  }
}

TEST_CASE("exhaustive and sampled modes agree on honest reports") {
  for (const ConstructionReport& r : small_reports(4, 20, 67)) {
    const bool exact = verify_exact(r.function, r).passed();
    const bool sampled = verify_sampled(r.function, r, 1'000'000, 42, 5.0).passed();
    CHECK(exact);
    CHECK(exact == sampled);
  }
}

}  // TEST_SUITE
