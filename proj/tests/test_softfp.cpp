#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "argred/softfp.hpp"
#include "oracle.hpp"

namespace argred {
namespace {

const Format kD = Format::binary64();

Fpn D(long m, std::int64_t e) { return Fpn::make(m < 0 ? -1 : 1, mpz_class(m < 0 ? -m : m), e, kD); }

Fpn Dz(const char* m, std::int64_t e) { return Fpn::make(1, mpz_class(m), e, kD); }

TEST(Fpn, CanonicalFormMakesEqualityStructural) {
  EXPECT_EQ(Fpn::make(1, 4, -2, kD), Fpn::from_int(1, kD));
  EXPECT_EQ(Fpn::from_int(1, kD).significand(), mpz_class(1) << 52);
  EXPECT_EQ(Fpn::from_int(1, kD).exponent(), -52);
  Fpn sub = Fpn::make(1, 3, -1074, kD);
  EXPECT_TRUE(sub.is_subnormal());
  EXPECT_EQ(sub.exponent(), -1074);
}

TEST(Fpn, MakeRejectsUnrepresentable) {
  EXPECT_THROW(Fpn::make(1, (mpz_class(1) << 53) + 1, 0, kD), std::domain_error);
  EXPECT_THROW(Fpn::make(1, 1, -1075, kD), std::domain_error);
  EXPECT_THROW(Fpn::make(1, 1, 1024, kD), std::domain_error);
  EXPECT_NO_THROW(Fpn::make(1, (mpz_class(1) << 54), -1, kD));
}

TEST(Round, OneThird) {
  Rounded r = round(ExactReal::ratio(1, 3), kD);
  EXPECT_EQ(r.value, Dz("6004799503160661", -54));
  EXPECT_TRUE(r.inexact);
}

TEST(Round, ReducedPrecisionTarget) {
  // 1/R to 51 bits, R the double reciprocal of pi.
  Fpn R = Dz("5734161139222659", -54);
  Rounded r = round(R.exact().reciprocal(), kD, 51);
  EXPECT_EQ(r.value, Dz("7074237752028440", -51));
}

TEST(Round, TiesEvenAndAway) {
  Fpn one = Fpn::from_int(1, kD);
  Fpn tiny = Fpn::pow2(-53, kD);
  EXPECT_EQ(fma(one, one, tiny, kD, Tie::kEven).value, one);
  EXPECT_EQ(fma(one, one, tiny, kD, Tie::kAway).value, D((1L << 52) + 1, -52));
  EXPECT_EQ(fma(-one, one, -tiny, kD, Tie::kAway).value, -D((1L << 52) + 1, -52));
}

TEST(Round, FmaAddsSmallProductToLargeShift) {
  Fpn R = Dz("5734161139222659", -54);
  Fpn sigma = D(3, 51);
  Rounded r = fma(Fpn::from_int(3, kD), R, sigma, kD);
  EXPECT_EQ(r.value, D(3L * (1L << 51) + 1, 0));
  EXPECT_TRUE(r.inexact);
}

TEST(Round, ExactCancellationGivesPositiveZero) {
  Fpn x = D(12345, -7);
  Rounded r = sub(x, x, kD);
  EXPECT_TRUE(r.value.is_zero());
  EXPECT_FALSE(r.value.negative());
  EXPECT_FALSE(r.inexact);
}

TEST(Round, OverflowThrows) {
  Fpn big = Fpn::pow2(1000, kD);
  EXPECT_THROW(mul(big, big, kD), OverflowError);
  Fpn top = Fpn::make(1, (mpz_class(1) << 53) - 1, 971, kD);
  EXPECT_THROW(next_up(top), OverflowError);
}

TEST(Round, SubnormalResults) {
  Fpn a = Fpn::pow2(-1070, kD);
  Rounded r = mul(a, Fpn::pow2(-3, kD), kD);
  EXPECT_EQ(r.value, Fpn::pow2(-1073, kD));
  EXPECT_FALSE(r.inexact);
  // Half of the smallest subnormal ties to zero under ties-to-even.
  Rounded h = mul(Fpn::pow2(-1074, kD), Fpn::pow2(-1, kD), kD);
  EXPECT_TRUE(h.value.is_zero());
  EXPECT_TRUE(h.inexact);
  Rounded ha = mul(Fpn::pow2(-1074, kD), Fpn::pow2(-1, kD), kD, Tie::kAway);
  EXPECT_EQ(ha.value, Fpn::pow2(-1074, kD));
}

TEST(Ulp, Examples) {
  Fpn C1 = Dz("7074237752028440", -51);
  EXPECT_EQ(ulp(C1), ExactReal::pow2(-51));
  EXPECT_EQ(ulp2(C1), ExactReal::pow2(-103));
  EXPECT_EQ(ulp(Fpn::from_int(1, kD)), ExactReal::pow2(-52));
  EXPECT_EQ(ulp(Fpn::zero(kD)), kD.lambda());
  EXPECT_EQ(ulp(Fpn::pow2(-1074, kD)), kD.lambda());
  EXPECT_EQ(ulp2_exponent(Fpn::pow2(-1000, kD)), -1074);
}

TEST(Ulp, Neighbours) {
  Fpn one = Fpn::from_int(1, kD);
  EXPECT_EQ(next_up(one).exact() - one.exact(), ExactReal::pow2(-52));
  EXPECT_EQ(one.exact() - next_down(one).exact(), ExactReal::pow2(-53));
  EXPECT_EQ(next_up(Fpn::zero(kD)), Fpn::pow2(-1074, kD));
  EXPECT_EQ(next_down(Fpn::zero(kD)), -Fpn::pow2(-1074, kD));
}

TEST(Representable, Examples) {
  EXPECT_TRUE(is_representable(ExactReal(7), 3, kD));
  EXPECT_FALSE(is_representable(ExactReal(9), 3, kD));
  EXPECT_TRUE(is_representable(ExactReal(96), 2, kD));
  EXPECT_FALSE(is_representable(ExactReal::ratio(1, 3), 53, kD));
  EXPECT_TRUE(is_representable(ExactReal::pow2(-1074), 1, kD));
  EXPECT_FALSE(is_representable(ExactReal::pow2(-1075), 53, kD));
  EXPECT_TRUE(is_representable(ExactReal(0), 1, kD));
}

TEST(Eft, Fast2SumExample) {
  Fpn a = Fpn::from_int(1, kD);
  Fpn b = Fpn::pow2(-60, kD);
  TwoTerm t = fast2sum(a, b, kD);
  EXPECT_EQ(t.hi, a);
  EXPECT_EQ(t.lo, b);
  EXPECT_EQ(t.hi.exact() + t.lo.exact(), a.exact() + b.exact());
}

TEST(Eft, Fast2SumPreconditionViolation) {
  Fpn a = D((1L << 52) + 1, -52);  // lowest bit 2^-52
  Fpn b = Fpn::from_int(3, kD);    // quantum 2^-51
  EXPECT_FALSE(fast2sum_precondition(a, b));
  EXPECT_THROW(fast2sum(a, b, kD), PreconditionError);
  // |a| < |b| but a on b's grid is fine.
  EXPECT_TRUE(fast2sum_precondition(Fpn::from_int(1, kD), b));
}

TEST(Eft, Fast2MultExampleAndUnderflow) {
  Fpn a = D((1L << 53) - 1, -53);
  TwoTerm t = fast2mult(a, a, kD);
  EXPECT_EQ(t.hi.exact() + t.lo.exact(), a.exact() * a.exact());
  EXPECT_FALSE(t.lo.is_zero());
  Fpn s = D((1L << 53) - 1, -600);
  EXPECT_THROW(fast2mult(s, s, kD), UnderflowError);
}

TEST(Kernel, CountsRoundedOperations) {
  Kernel k(kD);
  Fpn a = Fpn::from_int(3, kD);
  k.add(a, a);
  k.fma(a, a, a);
  EXPECT_EQ(k.ops(), 2);
  k.fast2sum(a, Fpn::pow2(-70, kD));
  EXPECT_EQ(k.ops(), 5);
  k.fast2mult(a, a);
  EXPECT_EQ(k.ops(), 7);
  Kernel::neg(a);
  EXPECT_EQ(k.ops(), 7);
}

class RandomAgainstOracle : public ::testing::TestWithParam<Tie> {};

TEST_P(RandomAgainstOracle, FmaAddMulMatchIndependentRounding) {
  const Tie tie = GetParam();
  std::mt19937_64 rng(20240601 + static_cast<int>(tie));
  using testing::oracle_round;
  using testing::random_fpn;
  for (int i = 0; i < 250000; ++i) {
    Fpn a = random_fpn(rng, kD, -40, 40);
    Fpn b = random_fpn(rng, kD, -40, 40);
    Fpn c = random_fpn(rng, kD, -80, 80);
    mpq_class exact = a.exact().rational() * b.exact().rational() + c.exact().rational();
    Rounded r = fma(a, b, c, kD, tie);
    mpq_class want = oracle_round(exact, kD, tie);
    ASSERT_EQ(cmp(r.value.exact().rational(), want), 0) << to_string(a) << " " << to_string(b) << " " << to_string(c);
    ASSERT_EQ(r.inexact, cmp(want, exact) != 0);
    mpq_class s = a.exact().rational() + c.exact().rational();
    ASSERT_EQ(cmp(add(a, c, kD, tie).value.exact().rational(), oracle_round(s, kD, tie)), 0);
    mpq_class pr = a.exact().rational() * b.exact().rational();
    ASSERT_EQ(cmp(mul(a, b, kD, tie).value.exact().rational(), oracle_round(pr, kD, tie)), 0);
  }
}

TEST_P(RandomAgainstOracle, SubnormalRangeFma) {
  const Tie tie = GetParam();
  std::mt19937_64 rng(77 + static_cast<int>(tie));
  for (int i = 0; i < 50000; ++i) {
    Fpn a = testing::random_fpn(rng, kD, -540, -530);
    Fpn b = testing::random_fpn(rng, kD, -540, -530);
    Fpn c = (i % 2 == 0) ? testing::random_fpn(rng, kD, -1022, -1000)
                         : Fpn::make((rng() & 1U) ? -1 : 1, mpz_class(static_cast<unsigned long>(rng() >> 12)), -1074, kD);
    mpq_class exact = a.exact().rational() * b.exact().rational() + c.exact().rational();
    ASSERT_EQ(cmp(fma(a, b, c, kD, tie).value.exact().rational(),
                  testing::oracle_round(exact, kD, tie)),
              0);
  }
}

INSTANTIATE_TEST_SUITE_P(BothTies, RandomAgainstOracle, ::testing::Values(Tie::kEven, Tie::kAway));

std::vector<Fpn> all_positive(const Format& f, std::int64_t lo_msb, std::int64_t hi_msb) {
  std::vector<Fpn> v;
  for (std::int64_t e = lo_msb; e <= hi_msb; ++e) {
    for (long m = 1L << (f.p - 1); m < (1L << f.p); ++m) v.push_back(Fpn::make(1, m, e - f.p + 1, f));
  }
  return v;
}

TEST(SmallPrecision, ExhaustiveProperties) {
  for (int p = 4; p <= 6; ++p) {
    Format f = Format::custom(p, -30, 30);
    std::vector<Fpn> xs = all_positive(f, -3, 3);
    for (const Fpn& x : xs) {
      // Rounding a representable value is the identity.
      ASSERT_EQ(round(x.exact(), f).value, x);
      for (const Fpn& y : xs) {
        Rounded s = add(x, y, f);
        ExactReal exact = x.exact() + y.exact();
        // Nearest: error at most half an ulp of the result.
        ExactReal err = (s.value.exact() - exact).abs();
        ASSERT_LE(err * ExactReal(2), ulp(s.value));
        // Sterbenz in the kernel.
        if (compare(y, x) <= 0 && x.exact() <= y.exact() * ExactReal(2)) {
          ASSERT_FALSE(sub(x, y, f).inexact);
        }
      }
    }
    // Monotone in the exact value.
    for (std::size_t i = 1; i < xs.size(); ++i) {
      ExactReal mid = (xs[i - 1].exact() + xs[i].exact()) / ExactReal(2);
      ExactReal just_above = mid + ExactReal::pow2(-80);
      ASSERT_LE(compare(round(mid, f).value, round(just_above, f).value), 0);
    }
  }
}

TEST(Text, RoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    Fpn x = testing::random_fpn(rng, kD, -1000, 1000);
    EXPECT_EQ(parse_fpn(to_string(x), kD), x);
    EXPECT_EQ(parse_fpn(to_hex_string(x), kD), x);
  }
  EXPECT_EQ(to_string(Fpn::zero(kD)), "0 * 2^-1074");
  EXPECT_EQ(parse_exact("-0x1a * 2^-3"), ExactReal::ratio(-26, 8));
  EXPECT_EQ(parse_exact("2.5e1"), ExactReal(25));
  EXPECT_EQ(parse_exact("0.1"), ExactReal::ratio(1, 10));
  EXPECT_THROW(parse_exact("1 * 3^2"), std::invalid_argument);
  EXPECT_THROW(parse_fpn("0.1", kD), std::domain_error);
}

TEST(FormatTest, Presets) {
  EXPECT_EQ(format_by_name("double"), Format::binary64());
  EXPECT_EQ(format_by_name("extended"), Format::extended());
  EXPECT_EQ(format_by_name("quad")->p, 113);
  EXPECT_FALSE(format_by_name("half").has_value());
  EXPECT_THROW(Format::custom(3, -10, 10), std::invalid_argument);
}

}  // namespace
}  // namespace argred
