#include <cstdint>
#include <limits>

#include <gtest/gtest.h>

#include "tlsynth/error.h"
#include "tlsynth/rational.h"

namespace tlsynth {
namespace {

TEST(RationalTest, NormalizesSignAndTerms) {
  Rational r(6, -8);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 4);
  EXPECT_EQ(Rational(0, -5), Rational(0));
  EXPECT_THROW(Rational(1, 0), Error);
}

TEST(RationalTest, ArithmeticIsExact) {
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(Rational(1, 10) * Rational(10), Rational(1));
  EXPECT_EQ(Rational(3, 4) / Rational(3, 2), Rational(1, 2));
  EXPECT_EQ(Rational(1) - Rational(7, 3), Rational(-4, 3));
  EXPECT_LT(Rational(1, 3), Rational(34, 100));
  EXPECT_GT(Rational(-1, 3), Rational(-34, 100));
}

TEST(RationalTest, OverflowThrows) {
  Rational big(std::numeric_limits<int64_t>::max());
  try {
    (void)(big + Rational(1));
    FAIL() << "expected overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOverflow);
  }
  // Large intermediates that reduce back into range are fine.
  Rational a(int64_t{1} << 40, 3), b(3, int64_t{1} << 40);
  EXPECT_EQ(a * b, Rational(1));
}

TEST(RationalTest, ParsesFractionsAndDecimals) {
  EXPECT_EQ(Rational::Parse("13/3"), Rational(13, 3));
  EXPECT_EQ(Rational::Parse("-0.3309"), Rational(-3309, 10000));
  EXPECT_EQ(Rational::Parse("7"), Rational(7));
  EXPECT_EQ(Rational::Parse("0.5"), Rational(1, 2));
  EXPECT_THROW(Rational::Parse("1/"), Error);
  EXPECT_THROW(Rational::Parse("abc"), Error);
}

TEST(RationalTest, DecimalRenderingRoundsHalfEven) {
  EXPECT_EQ(Rational(13, 3).ToDecimal(4), "4.3333");
  EXPECT_EQ(Rational(26691, 10000).ToDecimal(4), "2.6691");
  EXPECT_EQ(Rational(5, 100000).ToDecimal(4), "0.0000");   // 0.00005 -> even
  EXPECT_EQ(Rational(15, 100000).ToDecimal(4), "0.0002");  // 0.00015 -> even
  EXPECT_EQ(Rational(-7, 2).ToDecimal(1), "-3.5");
  EXPECT_EQ(Rational(3).ToDecimal(4), "3.0000");
  EXPECT_EQ(Rational(7, 2).ToString(), "7/2");
  EXPECT_EQ(Rational(4).ToString(), "4");
}

TEST(ExtendedCostTest, SaturatingAddition) {
  ExtendedCost inf = ExtendedCost::PosInf();
  EXPECT_TRUE((inf + ExtendedCost(5)).IsPosInf());
  EXPECT_TRUE((ExtendedCost::NegInf() + ExtendedCost(5)).IsNegInf());
  EXPECT_EQ(ExtendedCost(Rational(1, 2)) + ExtendedCost(Rational(1, 2)), ExtendedCost(1));
  try {
    (void)(inf + ExtendedCost::NegInf());
    FAIL() << "expected a clash";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfinityClash);
  }
}

TEST(ExtendedCostTest, OrderingAndScaling) {
  EXPECT_LT(ExtendedCost::NegInf(), ExtendedCost(-1000));
  EXPECT_LT(ExtendedCost(1000), ExtendedCost::PosInf());
  EXPECT_EQ(ExtendedCost::PosInf().ScaledBy(Rational(0)), ExtendedCost(0));
  EXPECT_EQ(ExtendedCost(6).ScaledBy(Rational(1, 3)), ExtendedCost(2));
  EXPECT_EQ(ExtendedCost::Parse("+inf"), ExtendedCost::PosInf());
  EXPECT_EQ(ExtendedCost::Parse("-inf").ToString(), "-inf");
  EXPECT_EQ(ExtendedCost::Parse("3/2"), ExtendedCost(Rational(3, 2)));
}

}  // namespace
}  // namespace tlsynth
