#include <gtest/gtest.h>

#include "argred/theorems.hpp"

namespace argred {
namespace {

CheckConfig cfg_for(const std::string& id) {
  CheckConfig c;
  c.theorem = id;
  return c;
}

void expect_pass(const CheckResult& r) {
  EXPECT_TRUE(r.pass) << r.to_text();
  EXPECT_EQ(r.failure_count, 0U);
  EXPECT_GT(r.cases, 0U);
  if (r.expected_enumerated) EXPECT_EQ(r.enumerated, *r.expected_enumerated);
}

TEST(Sterbenz, SmallRadixAndPrecision) {
  for (int beta : {2, 3, 5}) {
    for (int p = 2; p <= 4; ++p) {
      CheckConfig c = cfg_for("sterbenz");
      c.beta = beta;
      c.p = p;
      c.binades = 4;
      CheckResult r = check_sterbenz(c);
      expect_pass(r);
      ASSERT_TRUE(r.expected_enumerated.has_value());
    }
  }
}

TEST(Sterbenz, GeneralisedBothOrders) {
  for (auto [p1, p2] : {std::pair{4, 2}, std::pair{2, 4}, std::pair{3, 3}}) {
    CheckConfig c = cfg_for("sterbenz2");
    c.p1 = p1;
    c.p2 = p2;
    c.binades = 4;
    expect_pass(check_sterbenz_approx2(c));
  }
}

TEST(Extraction, ExhaustiveSmallP) {
  CheckConfig c = cfg_for("thm3");
  c.p = 7;
  c.n_values = {0, 1};
  CheckResult r = check_thm3(c);
  expect_pass(r);
  // Extracted z of every admissible length shows up.
  for (int l = 2; l <= c.p - 2; ++l) {
    EXPECT_TRUE(r.notes["counts"].contains("ell_" + std::to_string(l))) << l;
  }
  EXPECT_FALSE(r.notes["counts"].contains("ell_" + std::to_string(c.p - 1)));
}

TEST(FirstStep, QEqualsTwoExhaustive) {
  CheckConfig c = cfg_for("correct3");
  c.p = 8;
  c.n_values = {0};
  expect_pass(check_correct3(c));
  CheckConfig d = c;
  d.p = 7;
  d.tie = Tie::kAway;
  d.n_values = {1};
  expect_pass(check_correct3(d));
}

TEST(FirstStep, AnyZOfBoundedLength) {
  CheckConfig c = cfg_for("correct1");
  c.p = 7;
  c.n_values = {0};
  CheckResult r = check_correct1(c);
  expect_pass(r);
  EXPECT_EQ(r.notes["counts"]["z_enumerated"], r.notes["expected_z_enumerated"]);
  EXPECT_TRUE(r.notes["counts"].contains("ell_" + std::to_string(c.p - 1)));
}

TEST(FirstStep, GeneralQWithRC1AtMostOne) {
  CheckConfig c = cfg_for("correct2");
  c.p = 7;
  c.n_values = {0};
  expect_pass(check_correct2(c));
}

TEST(Mining, WeakenedHypothesesReportNotFail) {
  CheckConfig c = cfg_for("correct1");
  c.p = 6;
  c.n_values = {0};
  c.weakened = true;
  CheckResult r = check_correct1(c);
  EXPECT_TRUE(r.pass) << r.to_text();
  EXPECT_TRUE(r.notes.contains("mining"));
  CheckConfig d = cfg_for("correct2");
  d.p = 6;
  d.n_values = {0};
  d.weakened = true;
  CheckResult r2 = check_correct2(d);
  EXPECT_TRUE(r2.pass) << r2.to_text();
  EXPECT_TRUE(r2.notes.contains("mining"));
}

TEST(SecondStep, ExhaustiveSyntheticSmallP) {
  CheckConfig c = cfg_for("thm6");
  c.p = 7;
  c.n_values = {0};
  c.tight_underflow = false;
  CheckResult r = check_thm6(c);
  expect_pass(r);
  EXPECT_GT(r.notes["counts"].value("ops_9", std::uint64_t{0}), 0U);
}

TEST(SecondStep, RandomizedDoubleAndTies) {
  for (Tie tie : {Tie::kEven, Tie::kAway}) {
    for (const char* c : {"pi", "ln2"}) {
      CheckConfig cfg = cfg_for("thm6");
      cfg.mode = Mode::kRandomized;
      cfg.constant = c;
      cfg.fmt = Format::binary64();
      cfg.n_values = {0, 5, 10};
      cfg.trials = 5000;
      cfg.tie = tie;
      CheckResult r = check_thm6(cfg);
      expect_pass(r);
      EXPECT_EQ(r.notes["counts"]["ops_9"].get<std::uint64_t>(), 15000U);
    }
  }
}

TEST(SecondStep, OtherPresetFormats) {
  for (const Format& f : {Format::binary32(), Format::extended(), Format::binary128()}) {
    CheckConfig cfg = cfg_for("thm6");
    cfg.mode = Mode::kRandomized;
    cfg.fmt = f;
    cfg.n_values = {0, 4};
    cfg.trials = 2000;
    expect_pass(check_thm6(cfg));
  }
}

TEST(ConstantError, Presets) { expect_pass(check_thm7(cfg_for("thm7"))); }

TEST(Eft, Randomized) {
  CheckConfig c = cfg_for("eft");
  c.mode = Mode::kRandomized;
  c.trials = 20000;
  CheckResult r = check_eft(c);
  expect_pass(r);
  EXPECT_EQ(r.notes["counts"]["fast2sum_calls"].get<std::uint64_t>(), 20000U);
  EXPECT_EQ(r.notes["counts"]["fast2mult_calls"].get<std::uint64_t>(), 20000U);
}

nlohmann::json without_config(CheckResult r) {
  nlohmann::json j = r.to_json();
  j.erase("config");
  return j;
}

TEST(Determinism, SameSeedSameResultAnyThreadCount) {
  CheckConfig c = cfg_for("thm6");
  c.mode = Mode::kRandomized;
  c.fmt = Format::binary64();
  c.trials = 3000;
  c.seed = 42;
  c.threads = 1;
  nlohmann::json a = without_config(run_check(c));
  c.threads = 3;
  nlohmann::json b = without_config(run_check(c));
  EXPECT_EQ(a, b);
  CheckConfig e = cfg_for("correct3");
  e.p = 7;
  e.n_values = {0};
  e.threads = 1;
  nlohmann::json x = without_config(run_check(e));
  e.threads = 4;
  EXPECT_EQ(x, without_config(run_check(e)));
}

TEST(Dispatch, UnknownAndAliases) {
  EXPECT_THROW(run_check(cfg_for("thm99")), std::invalid_argument);
  CheckConfig c = cfg_for("thm5");
  c.p = 6;
  c.n_values = {0};
  EXPECT_TRUE(run_check(c).pass);
  EXPECT_GE(theorem_ids().size(), 9U);
}

TEST(Dispatch, RefusesHugeExhaustiveSpaces) {
  CheckConfig c = cfg_for("correct3");
  c.p = 30;
  EXPECT_THROW(run_check(c), std::invalid_argument);
}

TEST(Demo, FindsTwoRoundingFailure) {
  CodyWaiteReport rep = demo_codywaite(1, 1);
  ASSERT_TRUE(rep.found());
  const CodyWaiteCase& k = rep.cases.front();
  EXPECT_FALSE(k.naive_exact);
  EXPECT_TRUE(k.fma_exact);
  EXPECT_NE(k.naive_u.exact(), k.naive_target);
  EXPECT_EQ(k.fma_u.exact(), k.fma_target);
  EXPECT_GT(k.naive_vs_c, k.second_vs_c);
  EXPECT_FALSE(rep.to_text().empty());
}

}  // namespace
}  // namespace argred
