#pragma once

// The fma-based argument reduction pipeline:
//
//   z  = {x R + sigma}_fma - sigma,   sigma = 3 * 2^(p-N-2)
//   u  = {x - z C1}_fma                                  (exact)
//   v1 + v2 = u - z C2                                   (exact, 9 flops)
//   w  = {v2 - z C3}_fma
//
// so that v1 + w approximates x - z C to about 2p bits.

#include <optional>
#include <stdexcept>

#include "argred/constgen.hpp"
#include "argred/softfp.hpp"

namespace argred {

// |x R| exceeds the bound under which z extraction is guaranteed.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A step that is proven exact under audited hypotheses was not.
class TheoremViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// 2^(p-N-2) - 2^-N.
ExactReal reduction_bound(const Format& fmt, int N);
bool in_reduction_range(const Fpn& x, const ConstantSet& cs, int N);

struct ZExtraction {
  Fpn z;
  // x R - z.
  ExactReal s;
  // Bit length of |z 2^N| (0 when z == 0).
  int ell = 0;
  // Whether |z| >= 2^(1-N), the case in which the guarantees on ell and s
  // apply; they are then verified and recorded in guarantees_hold.
  bool guaranteed_case = false;
  bool guarantees_hold = true;
};

// Throws RangeError when |x R| > 2^(p-N-2) - 2^-N. Without diagnostics, s
// is left at zero and the guarantees are not checked.
ZExtraction extract_z(const Fpn& x, const ConstantSet& cs, int N, Kernel& kernel,
                      bool diagnostics = true);
ZExtraction extract_z(const Fpn& x, const ConstantSet& cs, int N, Tie tie = Tie::kEven);

struct FirstStep {
  Fpn u;
  // u == x - z C1 exactly.
  bool exact = false;
};

FirstStep first_step(const Fpn& x, const Fpn& z, const ConstantSet& cs, Kernel& kernel);
FirstStep first_step(const Fpn& x, const Fpn& z, const ConstantSet& cs,
                     Tie tie = Tie::kEven);

struct SecondStep {
  Fpn v1;
  Fpn v2;
  // v1 + v2 == x - z C1 - z C2 exactly (checked with exact arithmetic when
  // verified, otherwise derived from the exactness of u and of the last
  // line).
  bool exact = false;
  // Rounded operations performed by the step.
  int ops = 0;
  // Intermediates: (p1, p2) = Fast2Mult(z, C2), (t1, t2) = Fast2Sum(u, -p1).
  Fpn p1;
  Fpn p2;
  Fpn t1;
  Fpn t2;
  // The three operations of the v2 line committed no rounding error.
  bool last_line_exact = false;
};

// u as returned by first_step. Throws PreconditionError if Fast2Sum's
// precondition fails and UnderflowError if Fast2Mult's error term underflows.
SecondStep second_step(const Fpn& x, const Fpn& z, const Fpn& u, const ConstantSet& cs,
                       Tie tie = Tie::kEven, bool verify = true, bool first_exact = true);

// w = {v2 - z C3}_fma.
Fpn third_step(const Fpn& v1, const Fpn& v2, const Fpn& z, const ConstantSet& cs,
               Tie tie = Tie::kEven);

// Upper bound on |v1 + w - (x - z C)| over the set's enclosure of C.
// nullopt without an enclosure.
std::optional<ExactReal> residual_bound(const Fpn& x, const Fpn& z, const Fpn& v1,
                                        const Fpn& w, const ConstantSet& cs);

struct ReductionOutput {
  Fpn z;
  Fpn u;
  Fpn v1;
  Fpn v2;
  Fpn w;
  int ell = 0;
  ExactReal s;
  bool exact_first = false;
  bool exact_second = false;
  int rounding_ops_second = 0;
  std::optional<ExactReal> residual;
};

struct ReduceOptions {
  Tie tie = Tie::kEven;
  // Exact-arithmetic diagnostics (s, exactness by oracle, residual). When
  // off, exactness flags come from the kernel's inexact flags.
  bool diagnostics = true;
};

ReductionOutput reduce(const Fpn& x, const ConstantSet& cs, int N,
                       const ReduceOptions& opts = {});

}  // namespace argred
