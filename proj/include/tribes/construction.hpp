#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tribes/analysis.hpp"
#include "tribes/boolfn.hpp"
#include "tribes/exact.hpp"

namespace tribes {

/// Budgets in non-increasing order; perm[p] is the original (0-based) index
/// of sorted[p]. Ties keep their original order.
struct SortedBounds {
  std::vector<Rational> sorted;
  std::vector<std::size_t> perm;
};

/// Greedy tribe sizes k_1..k_m over n sorted budgets.
///
/// Tribe i (0-based) covers sorted positions start(i) .. end(i)-1.
struct TribePartition {
  std::vector<std::uint32_t> k;
  std::size_t n = 0;

  std::size_t m() const noexcept { return k.size(); }
  /// s_i = k_1 + ... + k_i, with s_0 = 0.
  std::size_t prefix(std::size_t i) const noexcept;
  /// k_{m+1} = n - s_m + 1. Bookkeeping only.
  std::size_t residual() const noexcept { return n - prefix(m()) + 1; }

  friend bool operator==(const TribePartition&, const TribePartition&) = default;
};

inline constexpr double kLogTolerance = 1e-9;

/// A named conclusion of the theorem with its margin. `exact_margin` is set
/// whenever the check is decided by exact arithmetic.
struct Check {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::optional<Rational> exact_margin;
};

namespace check_names {
inline constexpr const char* kExpectationLower = "expectation-lower";
inline constexpr const char* kExpectationUpper = "expectation-upper";
inline constexpr const char* kInfluenceStrict = "influence-strict";
inline constexpr const char* kMStarMinimality = "m-star-minimality";
inline constexpr const char* kClaim1 = "claim1";
}  // namespace check_names

struct ConstructionReport {
  BoundSequence bounds;
  AnalysisSummary summary;
  Rational mu;
  bool guaranteed = false;
  SortedBounds sorted;
  TribePartition partition;
  std::size_t m_star = 0;
  TribesFunction function;
  Dyadic expectation;
  /// Indexed by original variable (0-based).
  std::vector<Dyadic> influences;
  std::vector<Check> checks;

  bool all_checks_pass() const noexcept;
  const Check* find_check(const std::string& name) const noexcept;
};

struct ConstructOptions {
  /// Slack for the log-based comparisons (claim 1, mu <= mu_max).
  double log_tolerance = kLogTolerance;
};

SortedBounds sort_bounds(const BoundSequence& bounds);

TribePartition partition(const SortedBounds& sb);

/// Least r with prod_{i<=r} (1 - 2^-k_i) <= 1 - mu (1-based count).
/// Throws ConstructionInfeasible when m = 0, MuNotAchievable when no prefix
/// qualifies, std::invalid_argument unless 0 < mu < 1.
std::size_t select_m_star(const TribePartition& p, const Rational& mu);

/// Tribes function on the first m_star tribes, positions mapped through perm.
TribesFunction build(const TribePartition& p, std::size_t m_star,
                     const SortedBounds& sb);

/// prod_{i < r} (1 - 2^-k_i) for r = 0..m: failure products of each prefix.
std::vector<Dyadic> failure_prefix_products(const TribePartition& p);

Dyadic analytic_expectation(const TribePartition& p, std::size_t m_star);

/// Influence of construction position q (0-based, q < n).
Dyadic analytic_influence(const TribePartition& p, std::size_t m_star,
                          std::size_t position);

/// Influence of each of the first m_star tribes' members, one value per tribe.
std::vector<Dyadic> analytic_tribe_influences(const TribePartition& p,
                                              std::size_t m_star);

/// sum_{i<=m} 2^-k_i - alpha/8.
double claim1_margin(const TribePartition& p, double alpha_value);

/// Everything the five checks look at, taken from whichever source
/// (analytic or oracle) the caller wants certified.
struct CheckInputs {
  const BoundSequence& bounds;
  const Rational& mu;
  const TribePartition& partition;
  std::size_t m_star;
  const Dyadic& expectation;
  const std::vector<Dyadic>& influences;  // by original index
  double alpha;
  double log_tolerance = kLogTolerance;
};

std::vector<Check> evaluate_checks(const CheckInputs& in);

ConstructionReport construct(const BoundSequence& bounds, const Rational& mu,
                             const ConstructOptions& opts = {});

}  // namespace tribes
