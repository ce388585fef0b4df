#include "argred/reduction.hpp"

#include <algorithm>

namespace argred {

namespace {

void require_pow2_neg_n(const Format& fmt, int N) {
  if (-static_cast<std::int64_t>(N) < fmt.e_min_q || -static_cast<std::int64_t>(N) > fmt.e_max) {
    throw RangeError("2^-N is not a number of format " + fmt.name() +
                     " (N = " + std::to_string(N) + ")");
  }
}

}  // namespace

ExactReal reduction_bound(const Format& fmt, int N) {
  return ExactReal::pow2(fmt.p - N - 2) - ExactReal::pow2(-N);
}

bool in_reduction_range(const Fpn& x, const ConstantSet& cs, int N) {
  return (x.exact() * cs.R.exact()).abs() <= reduction_bound(cs.fmt, N);
}

ZExtraction extract_z(const Fpn& x, const ConstantSet& cs, int N, Kernel& kernel,
                      bool diagnostics) {
  const Format& fmt = cs.fmt;
  if (fmt.p <= 3) throw RangeError("z extraction needs p > 3");
  require_pow2_neg_n(fmt, N);
  if (!in_reduction_range(x, cs, N)) {
    throw RangeError("argument too large for this N: |xR| <= 2^{p-N-2} - 2^{-N} fails (x = " +
                     to_string(x) + ", bound = 2^" + std::to_string(fmt.p - N - 2) + " - 2^" +
                     std::to_string(-N) + ")");
  }
  const Fpn sigma = Fpn::make(1, 3, fmt.p - N - 2, fmt);
  const Rounded t = kernel.fma(x, cs.R, sigma);
  ZExtraction out;
  out.z = kernel.sub(t.value, sigma).value;
  const Fpn& z = out.z;
  bool integral = true;
  if (!z.is_zero()) {
    integral = z.lsb_exponent() >= -N;
    out.ell = static_cast<int>(z.msb_exponent() + N + 1);
  }
  if (!diagnostics) return out;
  out.s = x.exact() * cs.R.exact() - z.exact();
  out.guaranteed_case = !z.is_zero() && z.msb_exponent() >= 1 - N;
  out.guarantees_hold = integral;
  if (out.guaranteed_case) {
    out.guarantees_hold = integral && out.ell >= 2 && out.ell <= fmt.p - 2 &&
                          out.s.abs() <= ExactReal::pow2(-N - 1);
  }
  return out;
}

ZExtraction extract_z(const Fpn& x, const ConstantSet& cs, int N, Tie tie) {
  Kernel k(cs.fmt, tie);
  return extract_z(x, cs, N, k);
}

FirstStep first_step(const Fpn& x, const Fpn& z, const ConstantSet& cs, Kernel& kernel) {
  Rounded u = kernel.fma(-z, cs.C1, x);
  return {std::move(u.value), !u.inexact};
}

FirstStep first_step(const Fpn& x, const Fpn& z, const ConstantSet& cs, Tie tie) {
  Kernel k(cs.fmt, tie);
  return first_step(x, z, cs, k);
}

SecondStep second_step(const Fpn& x, const Fpn& z, const Fpn& u, const ConstantSet& cs,
                       Tie tie, bool verify, bool first_exact) {
  Kernel k(cs.fmt, tie);
  SecondStep out;
  out.v1 = k.fma(-z, cs.C2, u).value;
  TwoTerm pm = k.fast2mult(z, cs.C2);
  TwoTerm ts;
  try {
    ts = k.fast2sum(u, -pm.hi);
  } catch (const PreconditionError& e) {
    throw TheoremViolation(std::string("second step: ") + e.what());
  }
  const Rounded a = k.sub(ts.hi, out.v1);
  const Rounded b = k.add(a.value, ts.lo);
  const Rounded v2 = k.sub(b.value, pm.lo);
  out.v2 = v2.value;
  out.last_line_exact = !(a.inexact || b.inexact || v2.inexact);
  out.ops = k.ops();
  out.p1 = std::move(pm.hi);
  out.p2 = std::move(pm.lo);
  out.t1 = std::move(ts.hi);
  out.t2 = std::move(ts.lo);
  if (verify) {
    const ExactReal zc = z.exact();
    out.exact = out.v1.exact() + out.v2.exact() ==
                x.exact() - zc * cs.C1.exact() - zc * cs.C2.exact();
  } else {
    out.exact = first_exact && out.last_line_exact;
  }
  return out;
}

Fpn third_step(const Fpn& /*v1*/, const Fpn& v2, const Fpn& z, const ConstantSet& cs,
               Tie tie) {
  return fma(-z, cs.C3, v2, cs.fmt, tie).value;
}

std::optional<ExactReal> residual_bound(const Fpn& x, const Fpn& z, const Fpn& v1,
                                        const Fpn& w, const ConstantSet& cs) {
  if (!cs.c_enclosure) return std::nullopt;
  const ExactReal base = v1.exact() + w.exact() - x.exact();
  const ExactReal zc = z.exact();
  const ExactReal a = (base + zc * cs.c_enclosure->lo).abs();
  const ExactReal b = (base + zc * cs.c_enclosure->hi).abs();
  return std::max(a, b);
}

ReductionOutput reduce(const Fpn& x, const ConstantSet& cs, int N, const ReduceOptions& opts) {
  Kernel k(cs.fmt, opts.tie);
  ZExtraction ze = extract_z(x, cs, N, k, opts.diagnostics);
  FirstStep fs = first_step(x, ze.z, cs, k);
  ReductionOutput out;
  out.exact_first = fs.exact;
  if (opts.diagnostics) {
    out.exact_first = fs.u.exact() == x.exact() - ze.z.exact() * cs.C1.exact();
  }
  SecondStep ss = second_step(x, ze.z, fs.u, cs, opts.tie, opts.diagnostics, out.exact_first);
  out.w = third_step(ss.v1, ss.v2, ze.z, cs, opts.tie);
  if (opts.diagnostics) out.residual = residual_bound(x, ze.z, ss.v1, out.w, cs);
  out.z = std::move(ze.z);
  out.u = std::move(fs.u);
  out.v1 = std::move(ss.v1);
  out.v2 = std::move(ss.v2);
  out.ell = ze.ell;
  out.s = std::move(ze.s);
  out.exact_second = ss.exact;
  out.rounding_ops_second = ss.ops;
  return out;
}

}  // namespace argred
