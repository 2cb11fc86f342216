#include <gtest/gtest.h>

#include "hzlab/rational.hpp"

using namespace hzlab;

TEST(Rational, ParsesFractionsAndIntegers) {
  EXPECT_EQ(parse_rational("3/4"), rational(3, 4));
  EXPECT_EQ(parse_rational("-6/8"), rational(-3, 4));
  EXPECT_EQ(parse_rational("0"), Rational(0));
  EXPECT_EQ(parse_rational("12"), Rational(12));
}

TEST(Rational, RejectsDecimalsAndZeroDenominators) {
  EXPECT_THROW(parse_rational("0.5"), ParseError);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
  EXPECT_THROW(parse_rational("1/"), ParseError);
  EXPECT_THROW(parse_rational(" 1"), ParseError);
  EXPECT_THROW(parse_rational("1e3"), ParseError);
}

TEST(Rational, RoundTripsThroughString) {
  for (const char* s : {"0", "1", "-7/3", "123456789012345678901234567891/7"})
    EXPECT_EQ(to_string(parse_rational(s)), s);
}

TEST(Rational, LimitDenominatorFindsSmallFractions) {
  EXPECT_EQ(limit_denominator(0.8, 10000), rational(4, 5));
  EXPECT_EQ(limit_denominator(1.6, 10000), rational(8, 5));
  EXPECT_EQ(limit_denominator(1.0 / 3.0, 10000), rational(1, 3));
  EXPECT_EQ(limit_denominator(-0.25, 100), rational(-1, 4));
  EXPECT_EQ(limit_denominator(3.14159265358979, 100), rational(311, 99));
  EXPECT_EQ(limit_denominator(0.0, 10), Rational(0));
}

TEST(Rational, IntegerHelpers) {
  EXPECT_EQ(ipow(Integer(2), 10), Integer(1024));
  EXPECT_EQ(rpow(rational(2, 3), 3), rational(8, 27));
  EXPECT_EQ(floor(rational(-1, 2)), Integer(-1));
  EXPECT_EQ(floor(rational(7, 2)), Integer(3));
}
