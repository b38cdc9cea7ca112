#include "tribes/exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace tribes {

namespace {

std::strong_ordering to_ordering(int c) {
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

mpz_class shifted_left(const mpz_class& v, std::uint64_t bits) {
  mpz_class out;
  mpz_mul_2exp(out.get_mpz_t(), v.get_mpz_t(), bits);
  return out;
}

// Decimal exponents beyond this are rejected rather than materialized.
constexpr long kMaxDecimalExponent = 100000;

}  // namespace

// --- Dyadic -----------------------------------------------------------------

Dyadic::Dyadic(long integer) : mantissa_(integer), exponent_(0) {}

Dyadic::Dyadic(mpz_class mantissa, std::uint64_t exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
  normalize();
}

Dyadic Dyadic::pow2_neg(long k) {
  if (k < 1) {
    throw std::invalid_argument("pow2_neg: k must be >= 1, got " +
                                std::to_string(k));
  }
  return Dyadic(mpz_class(1), static_cast<std::uint64_t>(k));
}

void Dyadic::normalize() {
  if (sgn(mantissa_) == 0) {
    exponent_ = 0;
    return;
  }
  // scan1 finds the lowest set bit; this is the same for m and -m.
  const std::uint64_t trailing = mpz_scan1(mantissa_.get_mpz_t(), 0);
  const std::uint64_t shift = std::min(trailing, exponent_);
  if (shift > 0) {
    mpz_tdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), shift);
    exponent_ -= shift;
  }
}

Dyadic Dyadic::halved(std::uint64_t shift) const {
  if (is_zero()) return {};
  return Dyadic(mantissa_, exponent_ + shift);
}

double Dyadic::to_double() const {
  if (is_zero()) return 0.0;
  mpz_class magnitude = abs(mantissa_);
  const std::int64_t bits =
      static_cast<std::int64_t>(mpz_sizeinbase(magnitude.get_mpz_t(), 2));
  std::int64_t scale = -static_cast<std::int64_t>(exponent_);
  if (bits > 53) {
    const std::uint64_t drop = static_cast<std::uint64_t>(bits - 53);
    const bool half = mpz_tstbit(magnitude.get_mpz_t(), drop - 1) != 0;
    const bool sticky =
        drop > 1 && mpz_scan1(magnitude.get_mpz_t(), 0) < drop - 1;
    mpz_tdiv_q_2exp(magnitude.get_mpz_t(), magnitude.get_mpz_t(), drop);
    if (half && (sticky || mpz_odd_p(magnitude.get_mpz_t()))) ++magnitude;
    scale += static_cast<std::int64_t>(drop);
  }
  double out = magnitude.get_d();
  if (scale < -2200) return sign() < 0 ? -0.0 : 0.0;
  out = std::ldexp(out, static_cast<int>(std::min<std::int64_t>(scale, 2200)));
  return sign() < 0 ? -out : out;
}

Rational Dyadic::to_rational() const {
  return Rational(mantissa_, shifted_left(mpz_class(1), exponent_));
}

std::string Dyadic::str() const {
  return mantissa_.get_str() + "/2^" + std::to_string(exponent_);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  const std::uint64_t e = std::max(a.exponent_, b.exponent_);
  return Dyadic(shifted_left(a.mantissa_, e - a.exponent_) +
                    shifted_left(b.mantissa_, e - b.exponent_),
                e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return Dyadic(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

Dyadic Dyadic::operator-() const {
  Dyadic out = *this;
  out.mantissa_ = -out.mantissa_;
  return out;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  return compare(a, b);
}

Dyadic one_minus(const Dyadic& d) {
  if (d.sign() < 0 || d > Dyadic(1)) {
    throw std::invalid_argument("one_minus: argument " + d.str() +
                                " outside [0, 1]");
  }
  return Dyadic(1) - d;
}

// --- Rational ---------------------------------------------------------------

Rational::Rational(long integer) : value_(integer) {}

Rational::Rational(mpz_class numerator, mpz_class denominator) {
  if (sgn(denominator) == 0) {
    throw std::invalid_argument("Rational: zero denominator");
  }
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
  value_.canonicalize();
}

Rational Rational::parse_decimal(std::string_view text) {
  const auto fail = [&](const char* why) {
    return std::invalid_argument("invalid decimal '" + std::string(text) +
                                 "': " + why);
  };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++fraction_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) throw fail("no digits");

  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    if (i == text.size()) throw fail("empty exponent");
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw fail("bad exponent");
      }
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > kMaxDecimalExponent) throw fail("exponent too large");
    }
    if (exp_negative) exponent = -exponent;
  }
  if (i != text.size()) throw fail("trailing characters");

  mpz_class numerator(digits, 10);
  if (negative) numerator = -numerator;
  const long scale = exponent - fraction_digits;
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  if (scale >= 0) return Rational(numerator * power, mpz_class(1));
  return Rational(numerator, power);
}

std::optional<std::string> Rational::to_decimal() const {
  mpz_class den = value_.get_den();
  const unsigned long twos = mpz_scan1(den.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(den.get_mpz_t(), den.get_mpz_t(), twos);
  unsigned long fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5) != 0) {
    mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), 5);
    ++fives;
  }
  if (den != 1) return std::nullopt;

  const unsigned long scale = std::max(twos, fives);
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, scale);
  mpz_class scaled = abs(value_.get_num()) * power;
  mpz_divexact(scaled.get_mpz_t(), scaled.get_mpz_t(),
               value_.get_den().get_mpz_t());

  std::string digits = scaled.get_str();
  if (digits.size() <= scale) digits.insert(0, scale + 1 - digits.size(), '0');
  std::string out = digits.substr(0, digits.size() - scale);
  std::string fraction = digits.substr(digits.size() - scale);
  while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
  if (!fraction.empty()) out += "." + fraction;
  if (sign() < 0) out.insert(0, "-");
  return out;
}

double Rational::to_double() const {
  if (const auto decimal = to_decimal()) {
    return std::strtod(decimal->c_str(), nullptr);
  }
  return value_.get_d();
}

std::string Rational::str() const {
  if (auto decimal = to_decimal()) return *decimal;
  return value_.get_str();
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(mpq_class(a.value_ + b.value_));
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(mpq_class(a.value_ - b.value_));
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(mpq_class(a.value_ * b.value_));
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return compare(a, b);
}

// --- Comparisons ------------------------------------------------------------

std::strong_ordering compare(const Dyadic& a, const Dyadic& b) {
  const std::uint64_t e = std::max(a.exponent(), b.exponent());
  return to_ordering(cmp(shifted_left(a.mantissa(), e - a.exponent()),
                         shifted_left(b.mantissa(), e - b.exponent())));
}

std::strong_ordering compare(const Rational& a, const Rational& b) {
  return to_ordering(cmp(a.value(), b.value()));
}

std::strong_ordering compare(const Dyadic& a, const Rational& b) {
  // a.m / 2^a.e  vs  p / q  <=>  a.m * q  vs  p * 2^a.e  (q > 0)
  const mpz_class lhs = a.mantissa() * b.value().get_den();
  const mpz_class rhs = shifted_left(b.value().get_num(), a.exponent());
  return to_ordering(cmp(lhs, rhs));
}

std::strong_ordering compare(const Rational& a, const Dyadic& b) {
  return 0 <=> compare(b, a);
}

Rational operator-(const Dyadic& a, const Rational& b) {
  return a.to_rational() - b;
}

Rational operator-(const Rational& a, const Dyadic& b) {
  return a - b.to_rational();
}

}  // namespace tribes
