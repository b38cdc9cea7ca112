#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tribes/exact.hpp"

namespace tribes {

/// Influence budgets a_1..a_n, each an exact rational in (0, 1].
///
/// Built from decimal strings; keeps the exact values, a double mirror of
/// each, and the source text.
class BoundSequence {
 public:
  BoundSequence() = default;

  /// Throws std::invalid_argument on unparsable text or a value outside (0, 1].
  static BoundSequence from_decimal_strings(std::span<const std::string> text);
  static BoundSequence from_rationals(std::vector<Rational> values);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const std::vector<Rational>& values() const noexcept { return values_; }
  const std::vector<double>& approx() const noexcept { return approx_; }
  const std::vector<std::string>& sources() const noexcept { return sources_; }
  const Rational& operator[](std::size_t j) const { return values_[j]; }

 private:
  std::vector<Rational> values_;
  std::vector<double> approx_;
  std::vector<std::string> sources_;
};

struct AnalysisSummary {
  double talagrand_sum = 0.0;
  double alpha = 0.0;
  double mu_max = 0.0;
  bool feasible = false;
};

/// a / (1 - log2 a) for a in (0, 1]. Exactly 1 at a = 1.
double talagrand_term(double a);

/// Same term for an exact value in [0, 1]; 0 maps to 0 and tiny values
/// do not underflow through the log.
double talagrand_term(const Dyadic& a);

/// Sum of a_j / (1 - log2 a_j). std::invalid_argument if any value is
/// outside (0, 1].
double talagrand_sum(std::span<const double> values);

/// Talagrand sum minus 2 ln 2.
double alpha(const BoundSequence& bounds);

/// 1 - exp(-alpha/8) for positive alpha, else 0.
double mu_max(double alpha_value);

AnalysisSummary analyze(const BoundSequence& bounds);

/// Talagrand sum of the actual influences divided by Var[f].
/// Throws ConstantFunction when var is 0.
double talagrand_ratio(std::span<const Dyadic> influences, const Dyadic& var);

/// max_j Inf_j / ((log2 n / n) Var[f]).
/// std::invalid_argument for n < 2, ConstantFunction when var is 0.
double kkl_ratio(std::span<const Dyadic> influences, std::size_t n,
                 const Dyadic& var);

}  // namespace tribes
