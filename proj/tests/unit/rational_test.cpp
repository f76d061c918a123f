#include "sumlevel/errors.hpp"
#include "sumlevel/rational.hpp"

#include <gtest/gtest.h>

#include <sstream>

using sumlevel::BigInt;
using sumlevel::DomainError;
using sumlevel::Rational;

TEST(Rational, StoresLowestTermsWithPositiveDenominator) {
    const Rational r(6, -4);
    EXPECT_EQ(r.numerator(), -3);
    EXPECT_EQ(r.denominator(), 2);
    EXPECT_EQ(r.str(), "-3/2");
    EXPECT_EQ(Rational(0, 7).str(), "0/1");
    EXPECT_EQ(Rational(5).str(), "5/1");
}

TEST(Rational, ZeroDenominatorIsRejected) {
    EXPECT_THROW(Rational(1, 0), DomainError);
    EXPECT_THROW(Rational::parse("3/0"), DomainError);
}

TEST(Rational, ArithmeticIsExact) {
    const Rational a(1, 3);
    const Rational b(1, 6);
    EXPECT_EQ(a + b, Rational(1, 2));
    EXPECT_EQ(a - b, Rational(1, 6));
    EXPECT_EQ(a * b, Rational(1, 18));
    EXPECT_EQ(a / b, Rational(2));
    EXPECT_EQ(-a, Rational(-1, 3));
    EXPECT_THROW(a / Rational(0), DomainError);
    EXPECT_THROW(Rational(0).reciprocal(), DomainError);
    EXPECT_EQ(Rational(3, 7).reciprocal(), Rational(7, 3));
}

TEST(Rational, OrderingMatchesValues) {
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_GT(Rational(2, 3), Rational(3, 5));
    EXPECT_EQ(Rational(2, 4), Rational(1, 2));
    EXPECT_LE(Rational(-1, 2), Rational(0));
}

TEST(Rational, ParseAcceptsFractionsAndIntegers) {
    EXPECT_EQ(Rational::parse("39/140"), Rational(39, 140));
    EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
    EXPECT_EQ(Rational::parse("-7"), Rational(-7));
    EXPECT_THROW(Rational::parse("abc"), DomainError);
    EXPECT_THROW(Rational::parse("1/x"), DomainError);
}

TEST(Rational, StringRoundTrip) {
    for (const Rational r : {Rational(39, 140), Rational(-5, 3), Rational(0), Rational(12)}) {
        EXPECT_EQ(Rational::parse(r.str()), r);
    }
    BigInt big = 1;
    big <<= 300;
    const Rational huge(BigInt(big + 1), big);
    EXPECT_EQ(Rational::parse(huge.str()), huge);
}

TEST(Rational, FloorRoundsTowardMinusInfinity) {
    EXPECT_EQ(Rational(7, 2).floor(), 3);
    EXPECT_EQ(Rational(-7, 2).floor(), -4);
    EXPECT_EQ(Rational(4).floor(), 4);
}

TEST(Rational, MediantUsesReducedRepresentations) {
    EXPECT_EQ(sumlevel::mediant(Rational(0, 1), Rational(1, 1)), Rational(1, 2));
    EXPECT_EQ(sumlevel::mediant(Rational(1, 3), Rational(1, 2)), Rational(2, 5));
    EXPECT_EQ(sumlevel::mediant(Rational(2, 4), Rational(1, 1)), Rational(2, 3));
}

TEST(Rational, ConvertsToDoubleAndStreams) {
    EXPECT_DOUBLE_EQ(Rational(39, 140).to_double(), 39.0 / 140.0);
    std::ostringstream out;
    out << Rational(3, 10);
    EXPECT_EQ(out.str(), "3/10");
    EXPECT_EQ(Rational(-3, 10).sign(), -1);
    EXPECT_TRUE(Rational(0).is_zero());
}
