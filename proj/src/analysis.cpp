#include "tribes/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tribes/error.hpp"

namespace tribes {

BoundSequence BoundSequence::from_decimal_strings(std::span<const std::string> text) {
  if (text.empty()) throw std::invalid_argument("bounds: need at least one value");
  BoundSequence out;
  for (std::size_t j = 0; j < text.size(); ++j) {
    Rational value;
    try {
      value = Rational::parse_decimal(text[j]);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("bound " + std::to_string(j + 1) + ": " + e.what());
    }
    if (value.sign() <= 0 || value > Rational(1)) {
      throw std::invalid_argument("bound " + std::to_string(j + 1) + " = " +
                                  text[j] + " is outside (0, 1]");
    }
    out.approx_.push_back(value.to_double());
    out.values_.push_back(std::move(value));
    out.sources_.push_back(text[j]);
  }
  return out;
}

BoundSequence BoundSequence::from_rationals(std::vector<Rational> values) {
  std::vector<std::string> text;
  text.reserve(values.size());
  for (const auto& v : values) {
    // Non-terminating values cannot round-trip through decimal text.
    auto decimal = v.to_decimal();
    if (!decimal) {
      throw std::invalid_argument("bound " + v.str() + " has no finite decimal form");
    }
    text.push_back(std::move(*decimal));
  }
  return from_decimal_strings(text);
}

double talagrand_term(double a) {
  if (a == 1.0) return 1.0;
  return a / (1.0 - std::log2(a));
}

double talagrand_term(const Dyadic& a) {
  if (a.is_zero()) return 0.0;
  if (a == Dyadic(1)) return 1.0;
  // a = d * 2^shift with d in [0.5, 1); log2 a = log2 d + shift.
  long shift = 0;
  const double d = mpz_get_d_2exp(&shift, a.mantissa().get_mpz_t());
  const double log2_a =
      std::log2(d) + static_cast<double>(shift) - static_cast<double>(a.exponent());
  return a.to_double() / (1.0 - log2_a);
}

double talagrand_sum(std::span<const double> values) {
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double a = values[j];
    if (!(a > 0.0 && a <= 1.0)) {
      throw std::invalid_argument("talagrand_sum: value " + std::to_string(a) +
                                  " at index " + std::to_string(j) +
                                  " outside (0, 1]");
    }
    sum += talagrand_term(a);
  }
  return sum;
}

double alpha(const BoundSequence& bounds) {
  return talagrand_sum(bounds.approx()) - 2.0 * std::numbers::ln2;
}

double mu_max(double alpha_value) {
  if (!(alpha_value > 0.0)) return 0.0;
  return -std::expm1(-alpha_value / 8.0);
}

AnalysisSummary analyze(const BoundSequence& bounds) {
  AnalysisSummary s;
  s.talagrand_sum = talagrand_sum(bounds.approx());
  s.alpha = s.talagrand_sum - 2.0 * std::numbers::ln2;
  s.mu_max = mu_max(s.alpha);
  s.feasible = s.alpha > 0.0;
  return s;
}

double talagrand_ratio(std::span<const Dyadic> influences, const Dyadic& var) {
  if (var.is_zero()) throw ConstantFunction("talagrand_ratio: Var[f] = 0");
  double sum = 0.0;
  for (const Dyadic& inf : influences) sum += talagrand_term(inf);
  return sum / var.to_double();
}

double kkl_ratio(std::span<const Dyadic> influences, std::size_t n,
                 const Dyadic& var) {
  if (n < 2) {
    throw std::invalid_argument("kkl_ratio: n must be >= 2 (log2 n = 0 otherwise)");
  }
  if (var.is_zero()) throw ConstantFunction("kkl_ratio: Var[f] = 0");
  const auto largest = std::max_element(influences.begin(), influences.end());
  const double top = largest == influences.end() ? 0.0 : largest->to_double();
  const double nd = static_cast<double>(n);
  return top / ((std::log2(nd) / nd) * var.to_double());
}

}  // namespace tribes
