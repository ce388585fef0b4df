#pragma once

// Generic-precision binary floating-point kernel.
//
// A value is sign * m * 2^e with 0 <= m < 2^p and e >= e_min_q. Every value
// is kept in canonical form (m >= 2^(p-1), or e == e_min_q for subnormals and
// zero), so two Fpn compare equal exactly when they hold the same bits.
// Operations compute the exact result and round once; there are no
// infinities or NaNs, overflow is reported as an exception.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "argred/exact.hpp"

namespace argred {

class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
};

class UnderflowError : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
};

// A documented precondition of an algorithm (Fast2Sum, ...) does not hold.
class PreconditionError : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
};

// How round-to-nearest breaks ties.
enum class Tie { kEven, kAway };

std::string_view to_string(Tie tie);
std::optional<Tie> tie_by_name(std::string_view name);

struct Format {
  int p = 53;                   // significand digits, hidden bit counted
  std::int64_t e_min_q = -1074; // quantum exponent of the smallest subnormal
  std::int64_t e_max = 1023;    // finite values are < 2^(e_max + 1)

  static Format binary32() { return {24, -149, 127}; }
  static Format binary64() { return {53, -1074, 1023}; }
  static Format extended() { return {64, -16445, 16383}; }
  static Format binary128() { return {113, -16494, 16383}; }
  // Throws std::invalid_argument unless p > 3 and the bounds are sane.
  static Format custom(int p, std::int64_t e_min_q, std::int64_t e_max);

  // Smallest positive subnormal.
  ExactReal lambda() const { return ExactReal::pow2(e_min_q); }
  // Preset name ("single", "double", "double-extended", "quad") or
  // "p<p>_emin<e_min_q>".
  std::string name() const;

  friend bool operator==(const Format&, const Format&) = default;
};

// Accepts single, double, double-extended (alias extended), quad.
std::optional<Format> format_by_name(std::string_view name);

class Fpn {
 public:
  // +0 in binary64.
  Fpn() : Fpn(Format{}) {}
  // +0 in fmt.
  explicit Fpn(const Format& fmt);

  static Fpn zero(const Format& fmt) { return Fpn(fmt); }
  // sign * m * 2^e, re-expressed canonically. Throws std::domain_error when
  // the value is not representable in fmt (too many bits, below the
  // subnormal quantum, or overflowing).
  static Fpn make(int sign, const mpz_class& m, std::int64_t e,
                  const Format& fmt);
  static Fpn pow2(std::int64_t k, const Format& fmt);
  static Fpn from_int(long v, const Format& fmt);
  // nullopt unless v is exactly representable in fmt.
  static std::optional<Fpn> from_exact(const ExactReal& v, const Format& fmt);

  int sign() const { return neg_ ? -1 : 1; }
  bool negative() const { return neg_; }
  const mpz_class& significand() const { return m_; }
  // Quantum exponent of the canonical representation.
  std::int64_t exponent() const { return e_; }
  const Format& format() const { return fmt_; }

  bool is_zero() const { return sgn(m_) == 0; }
  bool is_normal() const;
  bool is_subnormal() const { return !is_zero() && !is_normal(); }
  bool is_pow2() const;
  // floor(log2 |x|); x must be nonzero.
  std::int64_t msb_exponent() const;
  // Exponent of the lowest set bit of m * 2^e; x must be nonzero.
  std::int64_t lsb_exponent() const;
  // Signed significand, m or -m.
  mpz_class signed_significand() const;

  Fpn operator-() const;
  Fpn abs() const;
  ExactReal exact() const;
  // Same value expressed in another format; throws std::domain_error if it
  // does not fit.
  Fpn in_format(const Format& fmt) const;

  friend bool operator==(const Fpn& a, const Fpn& b) {
    return a.neg_ == b.neg_ && a.e_ == b.e_ && a.m_ == b.m_ &&
           a.fmt_ == b.fmt_;
  }

 private:
  friend Fpn make_canonical_unchecked(bool neg, mpz_class m, std::int64_t e,
                                      const Format& fmt);
  bool neg_ = false;
  mpz_class m_;
  std::int64_t e_ = 0;
  Format fmt_;
};

// Trusted constructor for already-canonical parts; no validation.
Fpn make_canonical_unchecked(bool neg, mpz_class m, std::int64_t e, const Format& fmt);

// Numeric three-way comparison of the represented values.
int compare(const Fpn& a, const Fpn& b);
// |a| versus |b|.
int compare_abs(const Fpn& a, const Fpn& b);

// A rounded result together with the exactness of the rounding.
struct Rounded {
  Fpn value;
  bool inexact = false;
};

// Nearest target_p-digit number to v, re-expressed canonically in fmt.
// 2 <= target_p <= fmt.p. Throws OverflowError past the format's range.
Rounded round(const ExactReal& v, const Format& fmt, int target_p,
              Tie tie = Tie::kEven);
inline Rounded round(const ExactReal& v, const Format& fmt,
                     Tie tie = Tie::kEven) {
  return round(v, fmt, fmt.p, tie);
}

// One rounding each, result in fmt.
Rounded add(const Fpn& a, const Fpn& b, const Format& fmt, Tie tie = Tie::kEven);
Rounded sub(const Fpn& a, const Fpn& b, const Format& fmt, Tie tie = Tie::kEven);
Rounded mul(const Fpn& a, const Fpn& b, const Format& fmt, Tie tie = Tie::kEven);
// round(a * b + c).
Rounded fma(const Fpn& a, const Fpn& b, const Fpn& c, const Format& fmt,
            Tie tie = Tie::kEven);

// Quantum of x's binade; 2^e_min_q for zero and subnormals.
std::int64_t ulp_exponent(const Fpn& x);
ExactReal ulp(const Fpn& x);
// ulp(ulp(x)), with ulp(x) taken as a number of x's format.
std::int64_t ulp2_exponent(const Fpn& x);
ExactReal ulp2(const Fpn& x);

// Neighbouring numbers of x's format; throw OverflowError past the range.
Fpn next_up(const Fpn& x);
Fpn next_down(const Fpn& x);

// v == m * 2^e for integers |m| < 2^digits and e >= fmt.e_min_q.
bool is_representable(const ExactReal& v, int digits, const Format& fmt);

struct TwoTerm {
  Fpn hi;
  Fpn lo;
};

// s = round(a + b), e = (a + b) - s exactly. Throws PreconditionError
// unless a == 0, b == 0, |a| >= |b|, or the lowest set bit of a is at or
// above the quantum of b.
TwoTerm fast2sum(const Fpn& a, const Fpn& b, const Format& fmt,
                 Tie tie = Tie::kEven);
bool fast2sum_precondition(const Fpn& a, const Fpn& b);
// h = round(a * b), l = a * b - h exactly (computed with one fma). Throws
// UnderflowError when the error term is not representable.
TwoTerm fast2mult(const Fpn& a, const Fpn& b, const Format& fmt,
                  Tie tie = Tie::kEven);

// Instrumented arithmetic context. Counts every rounded operation it
// performs; a fresh Kernel is cheap, so callers make one per computation
// whose operations they want to count.
class Kernel {
 public:
  explicit Kernel(Format fmt, Tie tie = Tie::kEven) : fmt_(fmt), tie_(tie) {}

  const Format& format() const { return fmt_; }
  Tie tie() const { return tie_; }
  int ops() const { return ops_; }
  void reset_ops() { ops_ = 0; }

  Rounded add(const Fpn& a, const Fpn& b);
  Rounded sub(const Fpn& a, const Fpn& b);
  Rounded mul(const Fpn& a, const Fpn& b);
  Rounded fma(const Fpn& a, const Fpn& b, const Fpn& c);
  // Exact, not counted.
  static Fpn neg(const Fpn& a) { return -a; }

  // 3 counted operations.
  TwoTerm fast2sum(const Fpn& a, const Fpn& b);
  // 2 counted operations.
  TwoTerm fast2mult(const Fpn& a, const Fpn& b);

 private:
  Format fmt_;
  Tie tie_;
  int ops_ = 0;
};

// Textual form "<signed decimal significand> * 2^<exponent>", the layout
// used in constant tables. Zero prints as "0 * 2^<e_min_q>".
std::string to_string(const Fpn& x);
// Same with a hexadecimal significand, "-0x1a * 2^-3".
std::string to_hex_string(const Fpn& x);

// Parses, exactly:
//   "[-]D * 2^E"  with D decimal or 0x-hexadecimal ("*" may also be "·"),
//   "[-]D"        an integer,
//   "[-]I.F[eX]"  a decimal literal.
// Throws std::invalid_argument on malformed input.
ExactReal parse_exact(std::string_view text);
// parse_exact followed by an exact conversion; throws std::domain_error if
// the value is not representable in fmt.
Fpn parse_fpn(std::string_view text, const Format& fmt);

}  // namespace argred
