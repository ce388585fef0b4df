#include "argred/exact.hpp"

#include <stdexcept>
#include <utility>

namespace argred {

std::int64_t bit_length(const mpz_class& v) {
  if (sgn(v) == 0) return 0;
  return static_cast<std::int64_t>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

ExactReal::ExactReal(mpq_class v) : q_(std::move(v)) { q_.canonicalize(); }

ExactReal ExactReal::dyadic(const mpz_class& m, std::int64_t e) {
  ExactReal r;
  if (e >= 0) {
    mpz_class n;
    mpz_mul_2exp(n.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    r.q_ = n;
  } else {
    mpz_class d;
    mpz_setbit(d.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    r.q_ = mpq_class(m, d);
    r.q_.canonicalize();
  }
  return r;
}

ExactReal ExactReal::pow2(std::int64_t e) { return dyadic(mpz_class(1), e); }

ExactReal ExactReal::ratio(const mpz_class& n, const mpz_class& d) {
  if (sgn(d) == 0) throw std::domain_error("ExactReal: zero denominator");
  mpq_class q(n, d);
  q.canonicalize();
  return ExactReal(std::move(q));
}

bool ExactReal::is_dyadic() const {
  const mpz_class& d = q_.get_den();
  return mpz_popcount(d.get_mpz_t()) == 1;
}

ExactReal ExactReal::abs() const {
  ExactReal r;
  r.q_ = ::abs(q_);
  return r;
}

ExactReal ExactReal::reciprocal() const {
  if (is_zero()) throw std::domain_error("ExactReal: reciprocal of zero");
  ExactReal r;
  mpq_inv(r.q_.get_mpq_t(), q_.get_mpq_t());
  return r;
}

std::int64_t ExactReal::floor_log2() const {
  if (is_zero()) throw std::domain_error("ExactReal: log2 of zero");
  const mpz_class n = ::abs(q_.get_num());
  const mpz_class& d = q_.get_den();
  std::int64_t e = bit_length(n) - bit_length(d);
  // 2^e <= n/d  <=>  n >= d*2^e
  mpz_class lhs = n, rhs = d;
  if (e >= 0) {
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  if (lhs < rhs) --e;
  return e;
}

mpz_class ExactReal::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

mpz_class ExactReal::round_to_integer() const {
  mpz_class fl = floor();
  // frac = v - floor, compared against 1/2 as 2*(num - fl*den) vs den
  mpz_class twice_rem = 2 * (q_.get_num() - fl * q_.get_den());
  const int c = cmp(twice_rem, q_.get_den());
  if (c > 0 || (c == 0 && mpz_odd_p(fl.get_mpz_t()))) fl += 1;
  return fl;
}

std::string ExactReal::to_string() const { return q_.get_str(); }

ExactReal ExactReal::operator-() const {
  ExactReal r;
  r.q_ = -q_;
  return r;
}

ExactReal& ExactReal::operator+=(const ExactReal& o) {
  q_ += o.q_;
  return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& o) {
  q_ -= o.q_;
  return *this;
}

ExactReal& ExactReal::operator*=(const ExactReal& o) {
  q_ *= o.q_;
  return *this;
}

ExactReal& ExactReal::operator/=(const ExactReal& o) {
  if (o.is_zero()) throw std::domain_error("ExactReal: division by zero");
  q_ /= o.q_;
  return *this;
}

}  // namespace argred
