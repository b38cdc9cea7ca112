#include "tribes/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tribes/error.hpp"

namespace tribes {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string influence_label(std::size_t position, std::size_t original) {
  return "influence[position " + std::to_string(position + 1) + ", variable " +
         std::to_string(original + 1) + "]";
}

void require_same_function(const TribesFunction& f, const ConstructionReport& report) {
  if (f.n != report.bounds.size() || f.var_map.size() != f.relevant()) {
    throw std::invalid_argument("tribes function does not fit the report's " +
                                std::to_string(report.bounds.size()) + " variables");
  }
  for (const std::size_t j : f.var_map) {
    if (j >= f.n) throw std::invalid_argument("var_map entry out of range");
  }
  if (report.influences.size() != report.bounds.size()) {
    throw std::invalid_argument("report has " +
                                std::to_string(report.influences.size()) +
                                " influences for " +
                                std::to_string(report.bounds.size()) + " bounds");
  }
}

void compare_exact(QuantityMatch& q) {
  q.match = q.oracle && *q.oracle == q.analytic;
  if (!q.match) {
    throw VerificationFailure(q.quantity + ": analytic " + q.analytic.str() +
                              " != oracle " + q.oracle->str());
  }
}

// z-score of an estimate against the analytic value, using the standard
// error a Bernoulli(p) mean would have at that sample size.
void score(QuantityMatch& q, const SampledEstimate& est, double z_threshold) {
  q.estimate = est.estimate;
  q.std_error = est.std_error;
  const double p = std::clamp(q.analytic.to_double(), 0.0, 1.0);
  const double expected_sd = std::sqrt(p * (1.0 - p) / static_cast<double>(est.samples));
  const double diff = est.estimate - q.analytic.to_double();
  if (expected_sd > 0.0) {
    q.z = diff / expected_sd;
  } else {
    q.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  q.match = std::abs(q.z) <= z_threshold;
}

}  // namespace

bool VerificationReport::passed() const noexcept {
  if (!expectation.match) return false;
  for (const auto& q : influences) {
    if (!q.match) return false;
  }
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

VerificationReport verify_exact(const TribesFunction& f,
                                const ConstructionReport& report, unsigned cap) {
  const auto start = Clock::now();
  require_same_function(f, report);
  const TruthTable tt = tribes_truth_table(f, cap);

  VerificationReport out;
  out.mode = VerifyMode::exhaustive;
  out.expectation.quantity = "expectation";
  out.expectation.analytic = report.expectation;
  out.expectation.oracle = expectation(tt);
  compare_exact(out.expectation);

  // Oracle influence for every original variable: truth-table value for
  // mapped positions, exactly 0 for variables f never reads.
  std::vector<Dyadic> oracle(report.bounds.size());
  std::vector<bool> mapped(report.bounds.size(), false);
  for (std::size_t q = 0; q < f.var_map.size(); ++q) {
    const std::size_t j = f.var_map[q];
    if (mapped[j]) throw std::invalid_argument("var_map is not injective");
    mapped[j] = true;
    QuantityMatch m;
    m.quantity = influence_label(q, j);
    m.position = q;
    m.original_index = j;
    m.analytic = report.influences[j];
    m.oracle = influence(tt, static_cast<unsigned>(q));
    compare_exact(m);
    oracle[j] = *m.oracle;
    out.influences.push_back(std::move(m));
  }
  for (std::size_t j = 0; j < mapped.size(); ++j) {
    if (mapped[j]) continue;
    QuantityMatch m;
    m.quantity = "influence[variable " + std::to_string(j + 1) + ", irrelevant]";
    m.original_index = j;
    m.analytic = report.influences[j];
    m.oracle = Dyadic();
    compare_exact(m);
    out.influences.push_back(std::move(m));
  }

  const double alpha_value = analyze(report.bounds).alpha;
  out.checks = evaluate_checks({report.bounds, report.mu, report.partition,
                                report.m_star, *out.expectation.oracle, oracle,
                                alpha_value});
  out.wall_time = seconds_since(start);
  return out;
}

VerificationReport verify_sampled(const TribesFunction& f,
                                  const ConstructionReport& report,
                                  std::uint64_t samples, std::uint64_t seed,
                                  double z_threshold) {
  if (samples < kMinSamples) {
    throw std::invalid_argument("verify_sampled: need at least " +
                                std::to_string(kMinSamples) + " samples, got " +
                                std::to_string(samples));
  }
  const auto start = Clock::now();
  require_same_function(f, report);

  VerificationReport out;
  out.mode = VerifyMode::sampled;
  out.samples = samples;
  out.seed = seed;
  out.z_threshold = z_threshold;

  out.expectation.quantity = "expectation";
  out.expectation.analytic = report.expectation;
  score(out.expectation, expectation_sampled(f, samples, seed), z_threshold);

  // One representative per tribe; members of a tribe share their influence.
  std::size_t position = 0;
  for (std::size_t i = 0; i < f.tribe_sizes.size(); ++i) {
    const std::size_t j = f.var_map[position];
    QuantityMatch m;
    m.quantity = influence_label(position, j);
    m.position = position;
    m.original_index = j;
    m.analytic = report.influences[j];
    score(m, influence_sampled(f, position, samples, seed + i + 1), z_threshold);
    out.influences.push_back(std::move(m));
    position += f.tribe_sizes[i];
  }

  out.checks = check_theorem(report, report.bounds, report.mu);
  out.wall_time = seconds_since(start);
  return out;
}

std::vector<Check> check_theorem(const ConstructionReport& report,
                                 const BoundSequence& bounds, const Rational& mu) {
  return evaluate_checks({bounds, mu, report.partition, report.m_star,
                          report.expectation, report.influences,
                          analyze(bounds).alpha});
}

}  // namespace tribes
