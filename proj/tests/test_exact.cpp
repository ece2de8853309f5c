#include "polyspace/exact.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace polyspace;

namespace {

// Carries when adding a and b in base 2.
int carries(unsigned long a, unsigned long b) {
  int c = 0, carry = 0;
  while (a || b || carry) {
    int s = static_cast<int>(a & 1) + static_cast<int>(b & 1) + carry;
    carry = s >= 2;
    c += carry;
    a >>= 1;
    b >>= 1;
  }
  return c;
}

// Pascal triangle rows 0..n as exact integers.
std::vector<std::vector<Integer>> pascal(int n) {
  std::vector<std::vector<Integer>> t(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    t[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i + 1), 1);
    for (int j = 1; j < i; ++j)
      t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] + t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
  }
  return t;
}

} // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(Rational::parse("1/2").str(), "1/2");
  EXPECT_EQ(Rational::parse("6/4").str(), "3/2");
  EXPECT_EQ(Rational::parse("-3").str(), "-3");
  EXPECT_EQ(Rational::parse("0/5").str(), "0");
  EXPECT_TRUE(Rational::parse("4/2").is_integer());
  for (const char *bad : {"", "1/0", "a", "1/-2", "1.5", "--1", "/3"})
    EXPECT_THROW(Rational::parse(bad), ValidationError) << bad;
}

TEST(Rational, Arithmetic) {
  Rational a(1, 3), b(1, 6);
  EXPECT_EQ(a + b, Rational(1, 2));
  EXPECT_EQ(a - b, Rational(1, 6));
  EXPECT_EQ(a * b, Rational(1, 18));
  EXPECT_EQ(a / b, Rational(2));
  EXPECT_LT(b, a);
  EXPECT_EQ((-a).sign(), -1);
}

TEST(Valuation, Basics) {
  EXPECT_EQ(nu2(Integer(48)).value(), 4);
  EXPECT_EQ(nu2(Rational(3, 8)).value(), -3);
  EXPECT_TRUE(nu2(Integer(0)).is_infinite());
  EXPECT_THROW(nu2(Integer(0)).value(), std::domain_error);
  EXPECT_LT(Valuation(1000), Valuation::infinite());
}

TEST(Valuation, RandomPairs) {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> num(-100000, 100000), den(1, 4096);
  for (int trial = 0; trial < 1000; ++trial) {
    Rational a(Integer(num(rng)), Integer(den(rng)));
    Rational b(Integer(num(rng)), Integer(den(rng)));
    EXPECT_EQ(nu2(a * b), nu2(a) + nu2(b));
    EXPECT_GE(nu2(a + b), std::min(nu2(a), nu2(b)));
    if (nu2(a) != nu2(b)) {
      EXPECT_EQ(nu2(a + b), std::min(nu2(a), nu2(b)));
    }
  }
}

TEST(Binomial, KummerCarries) {
  for (unsigned long a = 0; a <= 200; ++a)
    for (unsigned long b = 0; b <= 200; ++b)
      ASSERT_EQ(nu2(binom(static_cast<long>(a + b), static_cast<long>(a))).value(), carries(a, b)) << a << "," << b;
}

TEST(Binomial, PascalAndNegativeUpper) {
  auto t = pascal(60);
  for (int n = 0; n <= 60; ++n)
    for (int k = 0; k <= n; ++k)
      ASSERT_EQ(binom(n, k), t[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]);
  EXPECT_EQ(binom(5, 7), 0);
  EXPECT_EQ(binom(-3, 1), -3);
  for (int m = 1; m <= 30; ++m)
    for (int i = 0; i <= 30; ++i)
      ASSERT_EQ(binom(-m - 1, i), (i % 2 ? -1 : 1) * binom(m + i, i));
}

TEST(Alpha, MatchesBitCount) {
  for (std::uint64_t m = 0; m < 5000; ++m) {
    int c = 0;
    for (std::uint64_t x = m; x; x /= 2)
      c += static_cast<int>(x % 2);
    ASSERT_EQ(alpha(m), c);
  }
  // ν binom(2m, m) = α(m)
  for (int m = 1; m <= 100; ++m)
    EXPECT_EQ(nu2(binom(2 * m, m)).value(), alpha(static_cast<std::uint64_t>(m)));
}

TEST(Series, PowersAndInverse) {
  const int deg = 25;
  auto x = one_plus(Rational(1), deg);
  for (long a = -7; a <= 7; ++a)
    for (long b = -7; b <= 7; ++b)
      ASSERT_EQ(series_pow(x, a) * series_pow(x, b), series_pow(x, a + b));
  auto y = one_plus(Rational(1, 2), deg);
  EXPECT_EQ(series_inverse(y) * y, TruncatedSeries::one(deg));
  auto p = series_pow(x, -4);
  for (int i = 0; i <= deg; ++i)
    EXPECT_EQ(p[i], Rational(binom(-4, i)));
  EXPECT_THROW(series_inverse(TruncatedSeries(3)), std::invalid_argument);
}

TEST(Series, HalfBetaCoefficients) {
  for (int m = 1; m <= 20; ++m) {
    auto s = series_pow(one_plus(Rational(1, 2), m), -(m + 1));
    for (int i = 0; i <= m; ++i)
      ASSERT_EQ(s[i], Rational(binom(-m - 1, i)) * pow2(-i));
  }
}
