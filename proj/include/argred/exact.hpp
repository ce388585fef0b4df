#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace argred {

// Exact rational number. No operation on this type ever rounds; it is the
// reference against which every rounded result is judged.
class ExactReal {
 public:
  ExactReal() = default;
  ExactReal(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  explicit ExactReal(const mpz_class& v) : q_(v) {}
  explicit ExactReal(mpq_class v);

  // m * 2^e.
  static ExactReal dyadic(const mpz_class& m, std::int64_t e);
  static ExactReal pow2(std::int64_t e);
  // n / d, d != 0.
  static ExactReal ratio(const mpz_class& n, const mpz_class& d);

  const mpq_class& rational() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  // True when the denominator is a power of two.
  bool is_dyadic() const;
  bool is_integer() const { return q_.get_den() == 1; }

  ExactReal abs() const;
  ExactReal reciprocal() const;
  // floor(log2 |v|); v must be nonzero.
  std::int64_t floor_log2() const;
  // Nearest integer, ties to even.
  mpz_class round_to_integer() const;
  mpz_class floor() const;

  // Approximate value for display only.
  double to_double() const { return q_.get_d(); }
  // "n" or "n/d".
  std::string to_string() const;

  ExactReal operator-() const;
  ExactReal& operator+=(const ExactReal& o);
  ExactReal& operator-=(const ExactReal& o);
  ExactReal& operator*=(const ExactReal& o);
  ExactReal& operator/=(const ExactReal& o);

  friend ExactReal operator+(ExactReal a, const ExactReal& b) { return a += b; }
  friend ExactReal operator-(ExactReal a, const ExactReal& b) { return a -= b; }
  friend ExactReal operator*(ExactReal a, const ExactReal& b) { return a *= b; }
  friend ExactReal operator/(ExactReal a, const ExactReal& b) { return a /= b; }

  friend bool operator==(const ExactReal& a, const ExactReal& b) {
    return cmp(a.q_, b.q_) == 0;
  }
  friend std::strong_ordering operator<=>(const ExactReal& a,
                                          const ExactReal& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

// Bit length of |v| (0 for v == 0).
std::int64_t bit_length(const mpz_class& v);

}  // namespace argred
