#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace diapoly {

/// Exact rational number backed by GMP. The value is kept canonical at all
/// times: lowest terms, positive denominator, zero stored as 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long long v) : q_(mpz_from(v)) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const mpz_class& integer) : q_(integer) {}
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(mpq_class q);

  /// Accepts "p", "p/q" and finite decimals such as "-1.25".
  static Rational parse(std::string_view text);

  const mpq_class& raw() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  /// Integer value when the number is integral and fits in int64.
  std::optional<std::int64_t> to_int64() const;

  /// "p" for integers, "p/q" otherwise.
  std::string to_string() const;
  double to_double() const { return q_.get_d(); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  static mpz_class mpz_from(long long v);
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

mpz_class lcm(const mpz_class& a, const mpz_class& b);

/// True when the denominator has no prime factors besides 2 and 5, i.e. the
/// value has a finite decimal expansion.
bool has_finite_decimal(const Rational& r);

/// Decimal rendering; exact when has_finite_decimal(r), otherwise rounded to
/// `digits` fractional digits.
std::string to_decimal(const Rational& r, int digits = 20);

}  // namespace diapoly
