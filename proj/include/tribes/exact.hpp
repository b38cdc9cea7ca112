#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tribes {

class Rational;

/// Exact dyadic rational: mantissa / 2^exponent.
///
/// Always kept normalized: either the exponent is 0 or the mantissa is odd.
/// Zero is stored as (0, 0). Every probability attached to a tribes function
/// lives in this type.
class Dyadic {
 public:
  Dyadic() = default;
  explicit Dyadic(long integer);
  Dyadic(mpz_class mantissa, std::uint64_t exponent);

  /// Exactly 2^-k. Throws std::invalid_argument for k < 1.
  static Dyadic pow2_neg(long k);

  const mpz_class& mantissa() const noexcept { return mantissa_; }
  std::uint64_t exponent() const noexcept { return exponent_; }

  bool is_zero() const noexcept { return sgn(mantissa_) == 0; }
  int sign() const noexcept { return sgn(mantissa_); }

  /// value / 2^shift, exact.
  Dyadic halved(std::uint64_t shift) const;

  /// Nearest double (ties to even); underflows gracefully to 0.
  double to_double() const;
  Rational to_rational() const;
  /// "m/2^e" form, mainly for diagnostics.
  std::string str() const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic operator-() const;

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  void normalize();

  mpz_class mantissa_{0};
  std::uint64_t exponent_ = 0;
};

/// 1 - d for d in [0, 1]; std::invalid_argument otherwise.
Dyadic one_minus(const Dyadic& d);

/// Exact rational in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  explicit Rational(long integer);
  Rational(mpz_class numerator, mpz_class denominator);
  explicit Rational(mpq_class value);

  /// Parses [+-]digits[.digits][(e|E)[+-]digits] exactly.
  /// Throws std::invalid_argument on anything else.
  static Rational parse_decimal(std::string_view text);

  const mpq_class& value() const noexcept { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  int sign() const noexcept { return sgn(value_); }

  /// Correctly rounded for terminating decimals; truncated otherwise.
  double to_double() const;

  /// Exact decimal expansion when the denominator is 2^a 5^b, with no
  /// trailing zeros after the point and no point for integers.
  std::optional<std::string> to_decimal() const;

  /// Decimal when terminating, "p/q" otherwise.
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.value_, b.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

 private:
  mpq_class value_{0};
};

// Exact orderings by integer cross-multiplication.
std::strong_ordering compare(const Dyadic& a, const Dyadic& b);
std::strong_ordering compare(const Rational& a, const Rational& b);
std::strong_ordering compare(const Dyadic& a, const Rational& b);
std::strong_ordering compare(const Rational& a, const Dyadic& b);

inline bool operator==(const Dyadic& a, const Rational& b) {
  return compare(a, b) == 0;
}
inline std::strong_ordering operator<=>(const Dyadic& a, const Rational& b) {
  return compare(a, b);
}

Rational operator-(const Dyadic& a, const Rational& b);
Rational operator-(const Rational& a, const Dyadic& b);

}  // namespace tribes
