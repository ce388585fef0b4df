#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "argred/constgen.hpp"

#ifndef ARGRED_GOLDEN_DIR
#error "ARGRED_GOLDEN_DIR must be defined"
#endif

namespace argred {
namespace {

struct GoldenRow {
  std::string constant, format, name, value;
};

std::vector<GoldenRow> load_golden() {
  std::ifstream in(std::string(ARGRED_GOLDEN_DIR) + "/tables.txt");
  std::vector<GoldenRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    GoldenRow r;
    ls >> r.constant >> r.format >> r.name;
    std::getline(ls, r.value);
    r.value.erase(0, r.value.find_first_not_of(' '));
    rows.push_back(r);
  }
  return rows;
}

const Fpn& member(const ConstantSet& cs, const std::string& name) {
  if (name == "R") return cs.R;
  if (name == "C1") return cs.C1;
  if (name == "C2") return cs.C2;
  return cs.C3;
}

TEST(Tables, AllThirtyTwoEntriesBitExact) {
  std::vector<GoldenRow> rows = load_golden();
  ASSERT_EQ(rows.size(), 32U);
  std::map<std::pair<std::string, std::string>, ConstantSet> cache;
  for (const GoldenRow& r : rows) {
    auto key = std::make_pair(r.constant, r.format);
    auto it = cache.find(key);
    if (it == cache.end()) {
      Format f = *format_by_name(r.format);
      it = cache.emplace(key, gen_constants(RealConstant::by_name(r.constant), f, 0)).first;
    }
    const Fpn& got = member(it->second, r.name);
    EXPECT_EQ(got, parse_fpn(r.value, got.format())) << r.constant << " " << r.format << " " << r.name;
    EXPECT_EQ(to_string(got), r.value);
  }
}

TEST(Generation, ConstructionInvariants) {
  for (const char* c : {"pi", "ln2"}) {
    for (const Format& f : preset_formats()) {
      ConstantSet cs = gen_constants(RealConstant::by_name(c), f, 0);
      // C1 has q = 2 trailing zero bits.
      EXPECT_LE(bit_length(cs.C1.significand() >> cs.C1.lsb_exponent() - cs.C1.exponent()), f.p - 2);
      EXPECT_EQ(cs.C1, round(cs.R.exact().reciprocal(), f, f.p - 2).value);
      // C2 on the 8 ulp2(C1) grid and small.
      ExactReal step = ulp2(cs.C1) * ExactReal(8);
      EXPECT_TRUE((cs.C2.exact() / step).is_integer());
      EXPECT_LE(cs.C2.exact().abs(), ulp(cs.C1) * ExactReal(4));
      // delta = R C1 - 1 is tiny.
      EXPECT_LT(delta(cs).abs(), ExactReal::pow2(-(f.p - 3)));
      // 1/R and C1 are within half a (p-2)-bit ulp.
      EXPECT_LE((cs.R.exact().reciprocal() - cs.C1.exact()).abs(), ulp(cs.C1) * ExactReal(2));
      ASSERT_TRUE(c1_within_four_ulps(cs).has_value());
      EXPECT_TRUE(*c1_within_four_ulps(cs));
      EXPECT_TRUE(audit(cs, 0).pass()) << audit(cs, 0).to_text();
    }
  }
}

TEST(Generation, NRange) {
  for (int N = 0; N <= 10; ++N) {
    for (const char* c : {"pi", "ln2"}) {
      ConstantSet cs = gen_constants(RealConstant::by_name(c), Format::binary64(), N);
      EXPECT_EQ(cs.N, N);
      EXPECT_TRUE(audit(cs, N).pass());
    }
  }
  ConstantSet quad = gen_constants(RealConstant::ln2(), Format::binary128(), 10);
  EXPECT_TRUE(audit(quad, 10).pass());
}

TEST(Generation, OtherQ) {
  Format d = Format::binary64();
  ConstantSet cs = gen_constants(RealConstant::pi(), d, 0, 3);
  EXPECT_EQ(cs.q, 3);
  EXPECT_EQ(cs.C1, round(cs.R.exact().reciprocal(), d, d.p - 3).value);
  // For q = 3 the general-q result also needs R C1 <= 1, which this R misses.
  AuditReport rep = audit(cs, 0);
  ASSERT_EQ(rep.failures().size(), 1U) << rep.to_text();
  EXPECT_EQ(rep.failures()[0].hypothesis, "R C1 <= 1");
  AdjustedSet adj = adjust_R_for_RC1_le_1(cs);
  EXPECT_NE(adj.ulps_moved, 0);
  EXPECT_TRUE(audit(adj.set, 0).pass()) << audit(adj.set, 0).to_text();
}

TEST(Generation, PreconditionErrors) {
  Format d = Format::binary64();
  EXPECT_THROW(gen_constants(RealConstant::pi(), d, 0, 1), HypothesisError);
  EXPECT_THROW(gen_constants(RealConstant::pi(), d, 0, 52), HypothesisError);
  EXPECT_THROW(gen_constants(RealConstant::pi(), d, 2000), HypothesisError);
  EXPECT_THROW(gen_constants(RealConstant::pi(), Format::custom(4, -60, 60), 0), HypothesisError);
}

TEST(Audit, PowerOfTwoC1Fails) {
  Format d = Format::binary64();
  ConstantSet cs = synthetic_constants(Fpn::pow2(-2, d), 2, 0);
  EXPECT_EQ(cs.C1, Fpn::pow2(2, d));
  AuditReport rep = audit(cs, 0);
  EXPECT_FALSE(rep.pass());
  bool named = false;
  for (const HypothesisCheck& h : rep.failures()) {
    named = named || h.hypothesis == "C1 is not exactly a power of 2";
  }
  EXPECT_TRUE(named) << rep.to_text();
  EXPECT_FALSE(c1_within_four_ulps(cs).has_value());
}

TEST(Audit, MisalignedC2Fails) {
  Format d = Format::binary64();
  ConstantSet good = gen_constants(RealConstant::pi(), d, 0);
  Fpn bad_c2 = Fpn::make(1, 1, ulp2_exponent(good.C1), d);
  ConstantSet cs = synthetic_constants(good.R, 2, 0, bad_c2, Fpn::zero(d));
  AuditReport rep = audit(cs, 0);
  EXPECT_FALSE(rep.pass());
  nlohmann::json j = rep.to_json();
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_GT(j["items"].size(), 5U);
}

TEST(Adjust, ReachesRC1AtMostOne) {
  for (const char* c : {"pi", "ln2"}) {
    for (const Format& f : preset_formats()) {
      ConstantSet cs = gen_constants(RealConstant::by_name(c), f, 0);
      AdjustedSet a = adjust_R_for_RC1_le_1(cs);
      EXPECT_LE(delta(a.set).sign(), 0);
      EXPECT_LE(std::abs(a.ulps_moved), 8);
      if (delta(cs).sign() <= 0) EXPECT_EQ(a.ulps_moved, 0);
      EXPECT_EQ(a.set.C1, round(a.set.R.exact().reciprocal(), f, f.p - 2).value);
    }
  }
}

TEST(Render, TableAndJson) {
  std::vector<ConstantSet> sets;
  for (const Format& f : preset_formats()) sets.push_back(gen_constants(RealConstant::pi(), f, 0));
  std::string t = render_table(sets);
  EXPECT_NE(t.find("5734161139222659 * 2^-54"), std::string::npos);
  EXPECT_NE(t.find("double-extended"), std::string::npos);
  nlohmann::json j = to_json(sets[1]);
  EXPECT_EQ(j["R"], "5734161139222659 * 2^-54");
  EXPECT_EQ(j["precision"], "double");
  EXPECT_EQ(j["q"], 2);
}

}  // namespace
}  // namespace argred
