#pragma once

// Reduction constants R ~ 1/C, C1 ~ C (with q trailing zero bits), and the
// correction terms C2, C3, plus an exact audit of every hypothesis the
// reduction steps rely on.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "argred/realnum.hpp"
#include "argred/softfp.hpp"

namespace argred {

// A generated constant set fails a hypothesis it must satisfy.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConstantSet {
  std::string c_id;
  int N = 0;
  int q = 2;
  Format fmt;
  Fpn R;
  Fpn C1;
  Fpn C2;
  Fpn C3;
  // The constant itself; absent for synthetic sets built from R alone.
  std::optional<RealConstant> constant;
  // Enclosure of C tight enough to measure third-step residuals.
  std::optional<RealEnclosure> c_enclosure;
};

// R = o_p(1/C), C1 = o_{p-q}(1/R), C2 = nearest multiple of 8 ulp2(C1) to
// C - C1, C3 = o_{p-q}(C - C1 - C2). Requires p > 4, 2 <= q < p - 1 and 2^-N
// representable. Throws HypothesisError naming the failed hypothesis.
ConstantSet gen_constants(const RealConstant& c, const Format& fmt, int N,
                          int q = 2);

// A set for a hypothetical constant known only through R: C1 = o_{p-q}(1/R)
// and caller-chosen C2, C3 (zero by default). No validation beyond
// representability; use audit() to evaluate the hypotheses.
ConstantSet synthetic_constants(const Fpn& R, int q, int N = 0);
ConstantSet synthetic_constants(const Fpn& R, int q, int N, const Fpn& C2,
                                const Fpn& C3);

struct HypothesisCheck {
  std::string theorem;     // check id: thm3, thm5, thm6, thm7, appendix
  std::string hypothesis;  // the condition as stated
  std::string evaluated;   // the instantiated inequality
  bool pass = false;
  // Whether the overall verdict depends on this line. Theorems that do not
  // govern the set's q are reported for information only.
  bool governing = true;
};

struct AuditReport {
  std::vector<HypothesisCheck> items;

  bool pass() const;
  std::vector<HypothesisCheck> failures() const;
  std::string to_text() const;
  nlohmann::json to_json() const;
};

// Every hypothesis evaluated exactly for table index width N.
AuditReport audit(const ConstantSet& cs, int N);

// |C - C1| <= 4 ulp(C1), with C taken at both ends of a certified
// enclosure. nullopt for synthetic sets.
std::optional<bool> c1_within_four_ulps(const ConstantSet& cs);

// delta = R * C1 - 1, exactly.
ExactReal delta(const ConstantSet& cs);

struct AdjustedSet {
  ConstantSet set;
  int ulps_moved = 0;  // signed: R' = R moved by this many ulps
};

// Moves R by the fewest ulps (trying -1, +1, -2, +2, ...) so that R * C1 <= 1
// once C1 (and C2, C3) are regenerated from it. Throws HypothesisError after
// 8 ulps.
AdjustedSet adjust_R_for_RC1_le_1(const ConstantSet& cs);

// Table layout: one row per constant (R, C1, C2, C3), one column per set.
std::string render_table(const std::vector<ConstantSet>& sets);
nlohmann::json to_json(const ConstantSet& cs);

// The four preset formats in table order.
std::vector<Format> preset_formats();

}  // namespace argred
