#pragma once

// Certified enclosures of real constants and correctly rounded conversions
// of them.

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "argred/exact.hpp"
#include "argred/softfp.hpp"

namespace argred {

// lo <= C <= hi with dyadic bounds.
struct RealEnclosure {
  ExactReal lo;
  ExactReal hi;

  ExactReal width() const { return hi - lo; }
  bool contains(const ExactReal& v) const { return lo <= v && v <= hi; }
  bool within(const RealEnclosure& outer) const {
    return outer.lo <= lo && hi <= outer.hi;
  }
  // "[lo, hi]" with both ends in the "m * 2^e" form when dyadic.
  std::string to_string() const;
};

// Width 2^-bits, on the grid [floor(pi 2^b), floor(pi 2^b) + 1] * 2^-b, from
// Machin's formula with rigorous alternating-series tail bounds.
RealEnclosure pi_enclosure(int bits);
// Same grid, from ln 2 = sum 1/(k 2^k) with a geometric tail bound.
RealEnclosure ln2_enclosure(int bits);

// Raised when refinement cannot separate the rounding candidates (the value
// is a tie or exactly on a rounding boundary, or a fixed enclosure is too
// wide).
class AmbiguousRoundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A positive real constant known through enclosures of any requested width.
class RealConstant {
 public:
  using Generator = std::function<RealEnclosure(int bits)>;

  RealConstant(std::string name, Generator gen, bool refinable = true)
      : name_(std::move(name)), gen_(std::move(gen)), refinable_(refinable) {}

  static RealConstant pi();
  static RealConstant ln2();
  // A constant known only through one user-supplied enclosure.
  static RealConstant fixed(std::string name, RealEnclosure enc);
  // c * 2^k, e.g. pi/2 or 2 pi.
  static RealConstant scaled_pow2(const RealConstant& c, int k);
  // "pi", "ln2"; throws std::invalid_argument otherwise.
  static RealConstant by_name(const std::string& name);

  const std::string& name() const { return name_; }
  bool refinable() const { return refinable_; }
  RealEnclosure enclose(int bits) const { return gen_(bits); }

 private:
  std::string name_;
  Generator gen_;
  bool refinable_;
};

// Interval bounds [lo, hi] on some real quantity, tightening as bits grow.
using IntervalFn = std::function<std::pair<ExactReal, ExactReal>(int bits)>;

inline constexpr int kMaxEnclosureBits = 1 << 15;

// Rounds the quantity bounded by `bounds` to target_p digits in fmt. Starts
// at 3 * target_p bits and doubles until both ends round to the same number,
// up to kMaxEnclosureBits.
Fpn safe_round(const IntervalFn& bounds, const Format& fmt, int target_p,
               Tie tie = Tie::kEven, bool refinable = true);
Fpn safe_round(const RealConstant& c, const Format& fmt, int target_p,
               Tie tie = Tie::kEven);
// Single enclosure, no refinement.
Fpn safe_round(const RealEnclosure& enc, const Format& fmt, int target_p,
               Tie tie = Tie::kEven);
// Nearest integer (ties to even) to the bounded quantity.
mpz_class safe_round_to_integer(const IntervalFn& bounds, bool refinable = true);

// Nearest target_p-digit number to num/den, decided by comparing
// candidates with integer cross-multiplication.
Fpn round_rational(const mpz_class& num, const mpz_class& den,
                   const Format& fmt, int target_p, Tie tie = Tie::kEven);

}  // namespace argred
