#include "argred/realnum.hpp"

#include <algorithm>
#include <optional>

namespace argred {

namespace {

mpz_class pow2z(std::int64_t k) {
  mpz_class r;
  mpz_setbit(r.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return r;
}

// Raw bounds lo <= C * 2^w <= hi for integers lo, hi.
struct RawBounds {
  mpz_class lo;
  mpz_class hi;
};

// atan(1/k) * 2^w within +-err.
std::pair<mpz_class, mpz_class> atan_inv(unsigned long k, std::int64_t w) {
  const mpz_class one = pow2z(w);
  const mpz_class k2 = mpz_class(k) * k;
  mpz_class power = k;
  mpz_class sum = 0;
  mpz_class t;
  unsigned long n = 0;
  for (;; ++n) {
    mpz_class den = power * (2 * n + 1);
    mpz_fdiv_q(t.get_mpz_t(), one.get_mpz_t(), den.get_mpz_t());
    if (sgn(t) == 0) break;
    if (n % 2 == 0) {
      sum += t;
    } else {
      sum -= t;
    }
    power *= k2;
  }
  // n truncations of less than one unit each, plus an alternating tail
  // smaller than the first omitted term (< 1).
  return {sum, mpz_class(n + 1)};
}

RawBounds pi_raw(std::int64_t w) {
  auto [a, ea] = atan_inv(5, w);
  auto [b, eb] = atan_inv(239, w);
  mpz_class mid = 16 * a - 4 * b;
  mpz_class err = 16 * ea + 4 * eb;
  return {mid - err, mid + err};
}

RawBounds ln2_raw(std::int64_t w) {
  const mpz_class one = pow2z(w);
  mpz_class sum = 0;
  mpz_class t;
  unsigned long k = 1;
  for (;; ++k) {
    mpz_fdiv_q_2exp(t.get_mpz_t(), one.get_mpz_t(), k);
    mpz_fdiv_q_ui(t.get_mpz_t(), t.get_mpz_t(), k);
    if (sgn(t) == 0) break;
    sum += t;
  }
  // k - 1 truncated terms below one unit each; the tail after them is below
  // twice the first omitted term, itself below one unit.
  return {sum, sum + (k - 1) + 2};
}

// Snaps raw bounds to the 2^-bits grid cell holding the constant, refining
// the working precision until the raw bounds lie inside one cell.
template <typename Raw>
RealEnclosure grid_enclosure(int bits, Raw raw) {
  if (bits < 1) throw std::invalid_argument("enclosure: bits must be >= 1");
  std::int64_t w = bits + 32;
  for (;;) {
    const RawBounds r = raw(w);
    mpz_class cl, ch;
    mpz_fdiv_q_2exp(cl.get_mpz_t(), r.lo.get_mpz_t(), static_cast<mp_bitcnt_t>(w - bits));
    mpz_fdiv_q_2exp(ch.get_mpz_t(), r.hi.get_mpz_t(), static_cast<mp_bitcnt_t>(w - bits));
    if (cl == ch) {
      return {ExactReal::dyadic(cl, -bits), ExactReal::dyadic(cl + 1, -bits)};
    }
    if (w > 4 * static_cast<std::int64_t>(kMaxEnclosureBits)) {
      throw AmbiguousRoundingError("enclosure: constant sits on a grid point");
    }
    w *= 2;
  }
}

std::string end_to_string(const ExactReal& v) {
  if (v.is_dyadic()) {
    const std::int64_t k = bit_length(v.denominator()) - 1;
    return v.numerator().get_str() + " * 2^" + std::to_string(-k);
  }
  return v.to_string();
}

}  // namespace

std::string RealEnclosure::to_string() const {
  return "[" + end_to_string(lo) + ", " + end_to_string(hi) + "]";
}

RealEnclosure pi_enclosure(int bits) { return grid_enclosure(bits, pi_raw); }

RealEnclosure ln2_enclosure(int bits) { return grid_enclosure(bits, ln2_raw); }

RealConstant RealConstant::pi() { return {"pi", pi_enclosure}; }

RealConstant RealConstant::ln2() { return {"ln2", ln2_enclosure}; }

RealConstant RealConstant::fixed(std::string name, RealEnclosure enc) {
  if (enc.hi < enc.lo) throw std::invalid_argument("enclosure: lo > hi");
  return {std::move(name), [enc](int) { return enc; }, false};
}

RealConstant RealConstant::scaled_pow2(const RealConstant& c, int k) {
  const ExactReal f = ExactReal::pow2(k);
  std::string name = c.name() + "*2^" + std::to_string(k);
  return {std::move(name),
          [c, f, k](int bits) {
            RealEnclosure e = c.enclose(std::max(1, bits + k));
            return RealEnclosure{e.lo * f, e.hi * f};
          },
          c.refinable()};
}

RealConstant RealConstant::by_name(const std::string& name) {
  if (name == "pi") return pi();
  if (name == "ln2") return ln2();
  throw std::invalid_argument("unknown constant '" + name + "' (expected pi or ln2)");
}

Fpn safe_round(const IntervalFn& bounds, const Format& fmt, int target_p,
               Tie tie, bool refinable) {
  for (int bits = 3 * target_p;; bits *= 2) {
    auto [lo, hi] = bounds(bits);
    Rounded a = round(lo, fmt, target_p, tie);
    Rounded b = round(hi, fmt, target_p, tie);
    if (a.value == b.value) return a.value;
    if (!refinable || bits >= kMaxEnclosureBits) {
      throw AmbiguousRoundingError("ambiguous rounding: enclosure " +
                                   to_string(a.value) + " .. " + to_string(b.value) +
                                   " does not determine the result");
    }
  }
}

Fpn safe_round(const RealConstant& c, const Format& fmt, int target_p, Tie tie) {
  return safe_round(
      [&c](int bits) {
        RealEnclosure e = c.enclose(bits);
        return std::pair{e.lo, e.hi};
      },
      fmt, target_p, tie, c.refinable());
}

Fpn safe_round(const RealEnclosure& enc, const Format& fmt, int target_p, Tie tie) {
  return safe_round([&enc](int) { return std::pair{enc.lo, enc.hi}; }, fmt,
                    target_p, tie, false);
}

mpz_class safe_round_to_integer(const IntervalFn& bounds, bool refinable) {
  for (int bits = 128;; bits *= 2) {
    auto [lo, hi] = bounds(bits);
    mpz_class a = lo.round_to_integer();
    mpz_class b = hi.round_to_integer();
    if (a == b) return a;
    if (!refinable || bits >= kMaxEnclosureBits) {
      throw AmbiguousRoundingError("ambiguous rounding to integer");
    }
  }
}

Fpn round_rational(const mpz_class& num, const mpz_class& den,
                   const Format& fmt, int target_p, Tie tie) {
  if (sgn(den) == 0) throw std::domain_error("round_rational: zero denominator");
  if (target_p < 2 || target_p > fmt.p) {
    throw std::invalid_argument("round_rational: target precision out of range");
  }
  if (sgn(num) == 0) return Fpn::zero(fmt);
  const bool neg = (sgn(num) < 0) != (sgn(den) < 0);
  mpz_class a = ::abs(num);
  mpz_class b = ::abs(den);
  // e = floor(log2(a / b)).
  std::int64_t e = bit_length(a) - bit_length(b);
  {
    mpz_class lhs = a, rhs = b;
    if (e >= 0) {
      rhs <<= static_cast<mp_bitcnt_t>(e);
    } else {
      lhs <<= static_cast<mp_bitcnt_t>(-e);
    }
    if (lhs < rhs) --e;
  }
  const std::int64_t qexp = std::max<std::int64_t>(e - target_p + 1, fmt.e_min_q);
  // a / b = (A / B) * 2^qexp.
  if (qexp >= 0) {
    b <<= static_cast<mp_bitcnt_t>(qexp);
  } else {
    a <<= static_cast<mp_bitcnt_t>(-qexp);
  }
  mpz_class m = a / b;
  // Candidates m and m + 1: compare (A/B - m) against 1/2.
  const int c = cmp(2 * (a - m * b), b);
  if (c > 0 || (c == 0 && (tie == Tie::kAway || mpz_odd_p(m.get_mpz_t())))) m += 1;
  try {
    return Fpn::make(neg ? -1 : 1, m, qexp, fmt);
  } catch (const std::domain_error&) {
    throw OverflowError("round_rational: result overflows format " + fmt.name());
  }
}

}  // namespace argred
