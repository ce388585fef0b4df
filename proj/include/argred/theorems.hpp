#pragma once

// Falsifiable checks for the exactness theorems behind the reduction:
// exhaustive sweeps at small precision and seeded randomized campaigns at
// working precision, each against an exact rational oracle.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "argred/softfp.hpp"

namespace argred {

enum class Mode { kExhaustive, kRandomized };

struct CheckConfig {
  // sterbenz, sterbenz2, thm3, correct1, correct2, correct3, thm6, thm7, eft
  std::string theorem;
  int p = 8;
  int p1 = 0;  // sterbenz2 only
  int p2 = 0;
  int beta = 2;  // radix of the Sterbenz checks
  int binades = 0;  // 0: 8 for Sterbenz checks, 12 for reduction sweeps
  std::vector<int> n_values{0, 1, 2};
  int q_min = 0;  // 0: theorem default
  int q_max = 0;
  Mode mode = Mode::kExhaustive;
  std::uint64_t seed = 1;
  std::uint64_t trials = 100000;
  Tie tie = Tie::kEven;
  // Working format of randomized campaigns.
  std::optional<Format> fmt;
  // pi or ln2 for campaigns over real constants.
  std::string constant = "pi";
  // Exhaustive sweeps: also run each R in the format with the largest
  // quantum allowed by the underflow hypothesis, subnormal x included.
  bool tight_underflow = true;
  // Counterexample mining: correct1 runs with q = 1, correct2 drops
  // R C1 <= 1. Findings are reported, never counted as failures.
  bool weakened = false;
  int threads = 0;  // 0: ARGRED_THREADS or the hardware concurrency
  // Significand multipliers j of C2 = j * 8 ulp2(C1) in exhaustive thm6.
  std::vector<int> c2_multipliers{};

  nlohmann::json to_json() const;
};

struct CheckResult {
  std::string theorem;
  nlohmann::json config;
  // In-hypothesis cases whose conclusions were checked.
  std::uint64_t cases = 0;
  // Every enumerated or drawn candidate, in or out of hypothesis.
  std::uint64_t enumerated = 0;
  // Closed-form size of the exhaustive case space.
  std::optional<std::uint64_t> expected_enumerated;
  std::uint64_t failure_count = 0;
  // First failures in enumeration order, each with replayable inputs.
  std::vector<nlohmann::json> failures;
  // Mining findings (weakened hypotheses only).
  std::vector<nlohmann::json> counterexamples;
  std::uint64_t counterexample_count = 0;
  nlohmann::json notes = nlohmann::json::object();
  bool pass = false;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

inline constexpr std::size_t kMaxReportedFailures = 20;
// Exhaustive sweeps refuse larger case spaces (std::invalid_argument).
inline constexpr std::uint64_t kMaxExhaustiveCases = 100000000;

int default_threads();

// x - y is representable in p radix-beta digits for every pair of p-digit
// numbers with y/2 <= x <= 2y.
CheckResult check_sterbenz(const CheckConfig& cfg);
// x - y has p2 digits whenever x, y have p1 digits and
// y / (1 + beta^(p2-p1)) <= x <= (1 + beta^(p2-p1)) y.
CheckResult check_sterbenz_approx2(const CheckConfig& cfg);
// z extraction conclusions: z 2^N an l-bit integer, 2 <= l <= p-2, and
// |xR - z| <= 2^(-N-1), whenever |z| >= 2^(1-N).
CheckResult check_thm3(const CheckConfig& cfg);
// x - z C1 is a p-bit number for any z = k 2^-N with |k| an l-bit integer,
// q <= l, 2 <= l <= p-1, and |xR - z| <= 2^(-N-1).
CheckResult check_correct1(const CheckConfig& cfg);
// Same conclusion for any 2 <= q <= p-1 when R C1 <= 1 and z is extracted.
CheckResult check_correct2(const CheckConfig& cfg);
// Same conclusion for q = 2 and an extracted z, with no restriction on z.
CheckResult check_correct3(const CheckConfig& cfg);
// The second step: Fast2Sum precondition holds, v1 + v2 = x - z C1 - z C2,
// 9 rounded operations. Randomized over a real constant set, or exhaustive
// at small p with synthetic C2.
CheckResult check_thm6(const CheckConfig& cfg);
// |C - C1| <= 4 ulp(C1) for the preset constant sets.
CheckResult check_thm7(const CheckConfig& cfg);
// Fast2Sum and Fast2Mult recompose exactly on random valid inputs.
CheckResult check_eft(const CheckConfig& cfg);

// Dispatch on cfg.theorem; throws std::invalid_argument on an unknown id.
CheckResult run_check(const CheckConfig& cfg);
std::vector<std::string> theorem_ids();

struct CodyWaiteCase {
  Fpn x;
  Fpn z;
  Fpn c1_full;        // o_p(C)
  Fpn naive_u;        // o(x - o(z c1_full))
  Fpn fma_u;          // {x - z C1}_fma with the (p-2)-bit C1
  ExactReal naive_target;  // x - z c1_full
  ExactReal fma_target;    // x - z C1
  bool naive_exact = false;
  bool fma_exact = false;
  ExactReal naive_error;   // |naive_u - (x - z c1_full)|
  ExactReal naive_vs_c;    // upper bound of |naive_u - (x - z C)|
  ExactReal fma_vs_c;      // upper bound of |fma_u - (x - z C)|
  ExactReal second_vs_c;   // upper bound of |v1 + v2 - (x - z C)|
  int cancelled_bits = 0;  // msb(x) - msb(x - z c1_full)
  int product_bits = 0;    // significant bits of z c1_full
};

struct CodyWaiteReport {
  std::uint64_t searched = 0;
  std::vector<CodyWaiteCase> cases;  // two-rounding inexact, fma exact
  bool found() const { return !cases.empty(); }
  std::string to_text() const;
  nlohmann::json to_json() const;
};

// Searches double-precision pi reductions with large z for first steps that
// the two-rounding sequence gets wrong while the fma first step is exact.
CodyWaiteReport demo_codywaite(std::uint64_t seed = 1, std::size_t want = 3,
                               std::uint64_t max_trials = 100000);

}  // namespace argred
