#include "argred/softfp.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace argred {

namespace {

mpz_class shl(const mpz_class& v, std::int64_t n) {
  mpz_class r;
  mpz_mul_2exp(r.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
  return r;
}

std::int64_t low_bit(const mpz_class& v) {
  return static_cast<std::int64_t>(mpz_scan1(v.get_mpz_t(), 0));
}

// Signed term (-1)^neg * mag * 2^e.
struct Term {
  bool neg = false;
  mpz_class mag;
  std::int64_t e = 0;

  bool zero() const { return sgn(mag) == 0; }
  std::int64_t top() const { return e + bit_length(mag) - 1; }
};

Term term_of(const Fpn& x) { return {x.negative(), x.significand(), x.exponent()}; }

// Rounds (-1)^neg * (mag + f) * 2^exp to `digits` digits, where f is in
// [0, 1) and f > 0 exactly when sticky is set.
Rounded round_magnitude(bool neg, mpz_class mag, std::int64_t exp, bool sticky,
                        int digits, const Format& fmt, Tie tie) {
  if (sgn(mag) == 0) return {Fpn::zero(fmt), false};
  const std::int64_t len = bit_length(mag);
  const std::int64_t top = exp + len - 1;
  std::int64_t qexp = std::max<std::int64_t>(top - digits + 1, fmt.e_min_q);
  bool inexact = false;
  mpz_class m;
  if (qexp <= exp) {
    m = shl(mag, exp - qexp);
  } else {
    const std::int64_t d = qexp - exp;
    mpz_fdiv_q_2exp(m.get_mpz_t(), mag.get_mpz_t(), static_cast<mp_bitcnt_t>(d));
    const bool half = mpz_tstbit(mag.get_mpz_t(), static_cast<mp_bitcnt_t>(d - 1)) != 0;
    const bool below_half = low_bit(mag) < d - 1;
    inexact = half || below_half || sticky;
    bool up = false;
    if (half) {
      if (below_half || sticky) {
        up = true;
      } else {
        up = (tie == Tie::kAway) || mpz_odd_p(m.get_mpz_t());
      }
    }
    if (up) {
      m += 1;
      if (bit_length(m) > digits) {
        m >>= 1;
        ++qexp;
      }
    }
  }
  if (sgn(m) != 0 && qexp + bit_length(m) - 1 > fmt.e_max) {
    throw OverflowError("overflow: result exceeds 2^" +
                        std::to_string(fmt.e_max + 1) + " in format " +
                        fmt.name());
  }
  return {make_canonical_unchecked(neg, std::move(m), qexp, fmt), inexact};
}

// Exact a + b rounded once. A term far below the other's rounding position
// is replaced by a same-signed stand-in that rounds identically, which keeps
// the aligned integers small when exponents are far apart.
Rounded round_sum(Term a, Term b, int digits, const Format& fmt, Tie tie) {
  if (a.zero()) return round_magnitude(b.neg, std::move(b.mag), b.e, false, digits, fmt, tie);
  if (b.zero()) return round_magnitude(a.neg, std::move(a.mag), a.e, false, digits, fmt, tie);
  Term* big = &a;
  Term* small = &b;
  if (small->top() > big->top()) std::swap(big, small);
  const std::int64_t k =
      std::min(big->e + low_bit(big->mag), big->top() - digits - 2);
  if (small->top() < k - 1) {
    small->mag = 1;
    small->e = k - 2;
  }
  const std::int64_t e = std::min(a.e, b.e);
  mpz_class sa = shl(a.mag, a.e - e);
  mpz_class sb = shl(b.mag, b.e - e);
  if (a.neg) sa = -sa;
  if (b.neg) sb = -sb;
  mpz_class s = sa + sb;
  const bool neg = sgn(s) < 0;
  if (neg) s = -s;
  return round_magnitude(neg, std::move(s), e, false, digits, fmt, tie);
}

Term product(const Fpn& a, const Fpn& b) {
  return {a.negative() != b.negative(), a.significand() * b.significand(),
          a.exponent() + b.exponent()};
}

}  // namespace

Fpn make_canonical_unchecked(bool neg, mpz_class m, std::int64_t e,
                             const Format& fmt) {
  Fpn r(fmt);
  if (sgn(m) == 0) return r;
  const std::int64_t shift =
      std::min<std::int64_t>(fmt.p - bit_length(m), e - fmt.e_min_q);
  if (shift > 0) {
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    e -= shift;
  }
  r.neg_ = neg;
  r.m_ = std::move(m);
  r.e_ = e;
  return r;
}

std::string_view to_string(Tie tie) {
  return tie == Tie::kEven ? "even" : "away";
}

std::optional<Tie> tie_by_name(std::string_view name) {
  if (name == "even") return Tie::kEven;
  if (name == "away") return Tie::kAway;
  return std::nullopt;
}

Format Format::custom(int p, std::int64_t e_min_q, std::int64_t e_max) {
  if (p <= 3) throw std::invalid_argument("format: precision must exceed 3");
  if (e_max < e_min_q + p) {
    throw std::invalid_argument("format: exponent range too narrow");
  }
  return {p, e_min_q, e_max};
}

std::string Format::name() const {
  if (*this == binary32()) return "single";
  if (*this == binary64()) return "double";
  if (*this == extended()) return "double-extended";
  if (*this == binary128()) return "quad";
  return "p" + std::to_string(p) + "_emin" + std::to_string(e_min_q);
}

std::optional<Format> format_by_name(std::string_view name) {
  if (name == "single") return Format::binary32();
  if (name == "double") return Format::binary64();
  if (name == "double-extended" || name == "extended") return Format::extended();
  if (name == "quad") return Format::binary128();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fpn

Fpn::Fpn(const Format& fmt) : e_(fmt.e_min_q), fmt_(fmt) {}

Fpn Fpn::make(int sign, const mpz_class& m_in, std::int64_t e,
              const Format& fmt) {
  mpz_class m = ::abs(m_in);
  bool neg = (sign < 0) != (sgn(m_in) < 0);
  if (sgn(m) == 0) return zero(fmt);
  const std::int64_t tz = low_bit(m);
  std::int64_t strip = std::max<std::int64_t>(bit_length(m) - fmt.p, 0);
  strip = std::max(strip, fmt.e_min_q - e);
  if (strip > 0) {
    if (tz < strip) {
      throw std::domain_error("value is not representable in format " + fmt.name());
    }
    m >>= static_cast<mp_bitcnt_t>(strip);
    e += strip;
  }
  if (e + bit_length(m) - 1 > fmt.e_max) {
    throw std::domain_error("value overflows format " + fmt.name());
  }
  return make_canonical_unchecked(neg, std::move(m), e, fmt);
}

Fpn Fpn::pow2(std::int64_t k, const Format& fmt) { return make(1, 1, k, fmt); }

Fpn Fpn::from_int(long v, const Format& fmt) { return make(1, mpz_class(v), 0, fmt); }

std::optional<Fpn> Fpn::from_exact(const ExactReal& v, const Format& fmt) {
  if (!is_representable(v, fmt.p, fmt)) return std::nullopt;
  if (v.is_zero()) return zero(fmt);
  const mpz_class& den = v.rational().get_den();
  const std::int64_t k = bit_length(den) - 1;
  try {
    return make(1, v.rational().get_num(), -k, fmt);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

bool Fpn::is_normal() const {
  return !is_zero() && bit_length(m_) == fmt_.p;
}

bool Fpn::is_pow2() const {
  return !is_zero() && mpz_popcount(m_.get_mpz_t()) == 1;
}

std::int64_t Fpn::msb_exponent() const { return e_ + bit_length(m_) - 1; }

std::int64_t Fpn::lsb_exponent() const { return e_ + low_bit(m_); }

mpz_class Fpn::signed_significand() const { return neg_ ? mpz_class(-m_) : m_; }

Fpn Fpn::operator-() const {
  Fpn r = *this;
  if (!r.is_zero()) r.neg_ = !r.neg_;
  return r;
}

Fpn Fpn::abs() const {
  Fpn r = *this;
  r.neg_ = false;
  return r;
}

ExactReal Fpn::exact() const { return ExactReal::dyadic(signed_significand(), e_); }

Fpn Fpn::in_format(const Format& fmt) const {
  return make(sign(), m_, e_, fmt);
}

int compare_abs(const Fpn& a, const Fpn& b) {
  if (a.is_zero() || b.is_zero()) return (a.is_zero() ? 0 : 1) - (b.is_zero() ? 0 : 1);
  const std::int64_t ta = a.msb_exponent();
  const std::int64_t tb = b.msb_exponent();
  if (ta != tb) return ta < tb ? -1 : 1;
  const std::int64_t e = std::min(a.exponent(), b.exponent());
  const int c = cmp(shl(a.significand(), a.exponent() - e),
                    shl(b.significand(), b.exponent() - e));
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int compare(const Fpn& a, const Fpn& b) {
  const int sa = a.is_zero() ? 0 : a.sign();
  const int sb = b.is_zero() ? 0 : b.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  const int c = compare_abs(a, b);
  return sa > 0 ? c : -c;
}

// ---------------------------------------------------------------------------
// Rounding and arithmetic

Rounded round(const ExactReal& v, const Format& fmt, int target_p, Tie tie) {
  if (target_p < 2 || target_p > fmt.p) {
    throw std::invalid_argument("round: target precision out of range");
  }
  if (v.is_zero()) return {Fpn::zero(fmt), false};
  const mpz_class& num = v.rational().get_num();
  const mpz_class& den = v.rational().get_den();
  const bool neg = sgn(num) < 0;
  mpz_class mag = ::abs(num);
  if (v.is_dyadic()) {
    return round_magnitude(neg, std::move(mag), -(bit_length(den) - 1), false,
                           target_p, fmt, tie);
  }
  // Quotient with at least target_p + 2 bits plus a sticky remainder.
  const std::int64_t s = target_p + 2 - (bit_length(mag) - bit_length(den));
  mpz_class n = mag;
  mpz_class d = den;
  if (s >= 0) {
    n = shl(n, s);
  } else {
    d = shl(d, -s);
  }
  mpz_class q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return round_magnitude(neg, std::move(q), -s, sgn(r) != 0, target_p, fmt, tie);
}

Rounded add(const Fpn& a, const Fpn& b, const Format& fmt, Tie tie) {
  return round_sum(term_of(a), term_of(b), fmt.p, fmt, tie);
}

Rounded sub(const Fpn& a, const Fpn& b, const Format& fmt, Tie tie) {
  Term tb = term_of(b);
  tb.neg = !tb.neg;
  return round_sum(term_of(a), std::move(tb), fmt.p, fmt, tie);
}

Rounded mul(const Fpn& a, const Fpn& b, const Format& fmt, Tie tie) {
  Term t = product(a, b);
  return round_magnitude(t.neg, std::move(t.mag), t.e, false, fmt.p, fmt, tie);
}

Rounded fma(const Fpn& a, const Fpn& b, const Fpn& c, const Format& fmt,
            Tie tie) {
  return round_sum(product(a, b), term_of(c), fmt.p, fmt, tie);
}

std::int64_t ulp_exponent(const Fpn& x) { return x.exponent(); }

ExactReal ulp(const Fpn& x) { return ExactReal::pow2(ulp_exponent(x)); }

std::int64_t ulp2_exponent(const Fpn& x) {
  const Format& fmt = x.format();
  return std::max<std::int64_t>(ulp_exponent(x) - fmt.p + 1, fmt.e_min_q);
}

ExactReal ulp2(const Fpn& x) { return ExactReal::pow2(ulp2_exponent(x)); }

Fpn next_up(const Fpn& x) {
  const Format& fmt = x.format();
  if (x.is_zero()) return Fpn::pow2(fmt.e_min_q, fmt);
  if (x.negative()) return -next_down(-x);
  mpz_class m = x.significand() + 1;
  if (x.exponent() + bit_length(m) - 1 > fmt.e_max) {
    throw OverflowError("next_up: past the largest finite number");
  }
  return Fpn::make(1, m, x.exponent(), fmt);
}

Fpn next_down(const Fpn& x) {
  const Format& fmt = x.format();
  if (x.is_zero()) return -Fpn::pow2(fmt.e_min_q, fmt);
  if (x.negative()) return -next_up(-x);
  const mpz_class& m = x.significand();
  if (x.is_normal() && mpz_popcount(m.get_mpz_t()) == 1 && x.exponent() > fmt.e_min_q) {
    // 2^(p-1) * 2^e steps down into the finer binade below.
    mpz_class top = shl(mpz_class(1), fmt.p);
    return Fpn::make(1, top - 1, x.exponent() - 1, fmt);
  }
  return Fpn::make(1, m - 1, x.exponent(), fmt);
}

bool is_representable(const ExactReal& v, int digits, const Format& fmt) {
  if (v.is_zero()) return true;
  if (!v.is_dyadic()) return false;
  mpz_class n = ::abs(v.rational().get_num());
  const std::int64_t tz = low_bit(n);
  n >>= static_cast<mp_bitcnt_t>(tz);
  const std::int64_t e = tz - (bit_length(v.rational().get_den()) - 1);
  if (e < fmt.e_min_q) return false;
  return bit_length(n) <= digits;
}

bool fast2sum_precondition(const Fpn& a, const Fpn& b) {
  if (a.is_zero() || b.is_zero()) return true;
  if (compare_abs(a, b) >= 0) return true;
  return a.lsb_exponent() >= b.exponent();
}

namespace {

TwoTerm fast2sum_impl(const Fpn& a, const Fpn& b, const Format& fmt, Tie tie,
                      int* ops) {
  if (!fast2sum_precondition(a, b)) {
    throw PreconditionError("Fast2Sum precondition violated for a = " +
                            to_string(a) + ", b = " + to_string(b));
  }
  Rounded s = add(a, b, fmt, tie);
  Rounded z = sub(s.value, a, fmt, tie);
  Rounded e = sub(b, z.value, fmt, tie);
  if (ops != nullptr) *ops += 3;
  if (z.inexact || e.inexact) {
    throw PreconditionError("Fast2Sum error term not exact for a = " +
                            to_string(a) + ", b = " + to_string(b));
  }
  return {std::move(s.value), std::move(e.value)};
}

TwoTerm fast2mult_impl(const Fpn& a, const Fpn& b, const Format& fmt, Tie tie,
                       int* ops) {
  Rounded h = mul(a, b, fmt, tie);
  Rounded l = fma(a, b, -h.value, fmt, tie);
  if (ops != nullptr) *ops += 2;
  if (l.inexact) {
    throw UnderflowError("Fast2Mult error term below the subnormal quantum for a = " +
                         to_string(a) + ", b = " + to_string(b));
  }
  return {std::move(h.value), std::move(l.value)};
}

}  // namespace

TwoTerm fast2sum(const Fpn& a, const Fpn& b, const Format& fmt, Tie tie) {
  return fast2sum_impl(a, b, fmt, tie, nullptr);
}

TwoTerm fast2mult(const Fpn& a, const Fpn& b, const Format& fmt, Tie tie) {
  return fast2mult_impl(a, b, fmt, tie, nullptr);
}

// ---------------------------------------------------------------------------
// Kernel

Rounded Kernel::add(const Fpn& a, const Fpn& b) {
  ++ops_;
  return argred::add(a, b, fmt_, tie_);
}

Rounded Kernel::sub(const Fpn& a, const Fpn& b) {
  ++ops_;
  return argred::sub(a, b, fmt_, tie_);
}

Rounded Kernel::mul(const Fpn& a, const Fpn& b) {
  ++ops_;
  return argred::mul(a, b, fmt_, tie_);
}

Rounded Kernel::fma(const Fpn& a, const Fpn& b, const Fpn& c) {
  ++ops_;
  return argred::fma(a, b, c, fmt_, tie_);
}

TwoTerm Kernel::fast2sum(const Fpn& a, const Fpn& b) {
  return fast2sum_impl(a, b, fmt_, tie_, &ops_);
}

TwoTerm Kernel::fast2mult(const Fpn& a, const Fpn& b) {
  return fast2mult_impl(a, b, fmt_, tie_, &ops_);
}

// ---------------------------------------------------------------------------
// Text

std::string to_string(const Fpn& x) {
  return x.signed_significand().get_str(10) + " * 2^" + std::to_string(x.exponent());
}

std::string to_hex_string(const Fpn& x) {
  std::string s = x.negative() ? "-0x" : "0x";
  return s + x.significand().get_str(16) + " * 2^" + std::to_string(x.exponent());
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
}

bool all_of(std::string_view s, int (*pred)(int)) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [pred](char c) {
    return pred(static_cast<unsigned char>(c)) != 0;
  });
}

// Optional sign then decimal digits or 0x-hex digits.
mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  mpz_class v;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    if (!all_of(s, isxdigit)) bad_number(whole);
    v.set_str(std::string(s), 16);
  } else {
    if (!all_of(s, isdigit)) bad_number(whole);
    v.set_str(std::string(s), 10);
  }
  return neg ? mpz_class(-v) : v;
}

std::int64_t parse_small_int(std::string_view s, std::string_view whole) {
  const mpz_class v = parse_integer(s, whole);
  if (!v.fits_slong_p()) bad_number(whole);
  return v.get_si();
}

ExactReal parse_decimal(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  std::int64_t exp10 = 0;
  if (const auto pos = s.find_first_of("eE"); pos != std::string_view::npos) {
    exp10 = parse_small_int(s.substr(pos + 1), whole);
    s = s.substr(0, pos);
  }
  std::string digits;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view ip = s.substr(0, dot);
    const std::string_view fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) bad_number(whole);
    if ((!ip.empty() && !all_of(ip, isdigit)) || (!fp.empty() && !all_of(fp, isdigit))) {
      bad_number(whole);
    }
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<std::int64_t>(fp.size());
  } else {
    if (!all_of(s, isdigit)) bad_number(whole);
    digits = std::string(s);
  }
  mpz_class m(digits, 10);
  if (neg) m = -m;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  return exp10 >= 0 ? ExactReal(mpz_class(m * scale)) : ExactReal::ratio(m, scale);
}

}  // namespace

ExactReal parse_exact(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) bad_number(text);
  std::size_t star = s.find('*');
  std::size_t after = star + 1;
  if (star == std::string_view::npos) {
    star = s.find("\xC2\xB7");  // middle dot
    after = star + 2;
  }
  if (star != std::string_view::npos) {
    const std::string_view sig = trim(s.substr(0, star));
    std::string_view pw = trim(s.substr(after));
    if (pw.size() < 3 || pw.substr(0, 2) != "2^") bad_number(text);
    pw.remove_prefix(2);
    if (!pw.empty() && pw.front() == '(' && pw.back() == ')') {
      pw = pw.substr(1, pw.size() - 2);
    }
    return ExactReal::dyadic(parse_integer(sig, text), parse_small_int(trim(pw), text));
  }
  const bool hex = s.find("0x") != std::string_view::npos ||
                   s.find("0X") != std::string_view::npos;
  if (!hex && s.find_first_of(".eE") != std::string_view::npos) {
    return parse_decimal(s, text);
  }
  return ExactReal(parse_integer(s, text));
}

Fpn parse_fpn(std::string_view text, const Format& fmt) {
  const ExactReal v = parse_exact(text);
  auto x = Fpn::from_exact(v, fmt);
  if (!x) {
    throw std::domain_error("'" + std::string(text) +
                            "' is not representable in format " + fmt.name());
  }
  return *x;
}

}  // namespace argred
