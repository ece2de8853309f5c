#include "polyspace/immersion.hpp"

#include <gtest/gtest.h>

using namespace polyspace;

namespace {

GeneticCode nk(int n, int k) { return GeneticCode(n, {SubsetMask::of({n, k})}); }
GeneticCode nk1(int n, int k) { return GeneticCode(n, {SubsetMask::of({n, k, 1})}); }

} // namespace

TEST(MFormula, TableCells) {
  EXPECT_EQ(M_formula_dim(16, 1), 61);
  EXPECT_EQ(M_formula_dim(16, 8), 47);
  EXPECT_EQ(M_formula_dim(24, 4), 85);
  EXPECT_THROW(M_formula(3, 4), ValidationError);
  EXPECT_THROW(sw_nonimmersion_dim(3, -1), ValidationError);
}

TEST(MFormula, SizeOneGeesGiveMMinusAlpha) {
  for (int m = 1; m <= 64; ++m)
    EXPECT_EQ(M_formula(m, 1), m - alpha(static_cast<std::uint64_t>(m))) << m;
}

TEST(MFormula, NonIncreasingInS) {
  for (int m = 1; m <= 40; ++m)
    for (int s = 1; s <= m; ++s)
      EXPECT_LE(M_formula(m, s), M_formula(m, s - 1));
}

TEST(StiefelWhitney, Comparison) {
  for (int m = 16; m <= 31; ++m) {
    EXPECT_LE(sw_nonimmersion_dim(m, 1), 61);
    for (int s = 0; s <= 8; ++s)
      EXPECT_LE(sw_nonimmersion_dim(m, s), M_formula_dim(m, s));
  }
  EXPECT_LT(sw_nonimmersion_dim(16, 7), 55);
  EXPECT_LT(sw_nonimmersion_dim(16, 8), M_formula_dim(16, 4));
}

TEST(Table1, Layout) {
  auto t = table1(Range::parse("16:17"), Range::parse("1:2"));
  EXPECT_EQ(t.at(16, 1), 61);
  EXPECT_EQ(t.at(17, 2), 61);
  EXPECT_THROW(Range::parse("5:3"), ValidationError);
  EXPECT_THROW(Range::parse("a:3"), ValidationError);
  EXPECT_THROW(Range::parse("3:"), ValidationError);
  EXPECT_EQ(Range::parse("7").lo, 7);
}

TEST(Series, TwoAdicBound) {
  for (int m = 1; m <= 24; ++m) {
    auto v = series_valuations(m);
    for (int i = 0; i <= m - 1; ++i)
      if (!v[static_cast<std::size_t>(i)].is_infinite()) {
        EXPECT_GE(v[static_cast<std::size_t>(i)].value(), i + alpha(static_cast<std::uint64_t>(m)) - m) << m << "," << i;
      }
  }
}

TEST(Nonimmersion, Examples) {
  EXPECT_EQ(nonimmersion_dim(GeneticCode::parse("{{5}}")), 5);
  EXPECT_EQ(nonimmersion_dim(nk(7, 4)), 13);
  for (int n = 5; n <= 11; ++n)
    for (int k = 1; k < n; ++k) {
      const int m = n - 3;
      EXPECT_EQ(nonimmersion_dim(nk(n, k)), 4 * m - 2 * alpha(static_cast<std::uint64_t>(m)) - 1);
    }
  auto ni = nonimmersion(nk(7, 4), KMode::GeneralQuotient);
  EXPECT_EQ(ni.truncation, 3);
  EXPECT_EQ(ni.dimension, M_formula_dim(4, 1));
}

TEST(Nonimmersion, Nk1Certificates) {
  auto odd = refined_nk1_certificate(7, 3);
  EXPECT_EQ(odd.valuation.value(), -3);
  EXPECT_TRUE(odd.certified);
  EXPECT_TRUE(odd.decomposition_holds);
  auto even = refined_nk1_certificate(7, 4);
  EXPECT_GT(even.valuation, Valuation(-3));
  EXPECT_FALSE(even.certified);
  EXPECT_TRUE(even.decomposition_holds);
  for (int n = 5; n <= 14; ++n)
    for (int k = 2; k < n; ++k) {
      auto c = refined_nk1_certificate(n, k);
      EXPECT_TRUE(c.decomposition_holds) << n << "," << k;
      EXPECT_GE(nu2(c.all_part), Valuation(c.target)) << n << "," << k;
      if (k % 2) {
        EXPECT_TRUE(c.certified) << n << "," << k;
      }
    }
  EXPECT_THROW(refined_nk1_certificate(7, 1), ValidationError);
  EXPECT_THROW(refined_nk1_certificate(7, 7), ValidationError);
}

TEST(Immersion, FourMMinusTwo) {
  EXPECT_EQ(immerses_in_4m_minus_2(nk(5, 2)), Verdict::DoesNotImmerse);
  EXPECT_EQ(immerses_in_4m_minus_2(nk(5, 3)), Verdict::Immerses);
  EXPECT_EQ(immerses_in_4m_minus_2(nk1(6, 3)), Verdict::Immerses);
  EXPECT_THROW(immerses_in_4m_minus_2(GeneticCode::parse("{{4,1}}")), ValidationError);
  // the indeterminacy vanishes for {{n,k}} with m a power of two
  auto t = immersion_4m_minus_2(build_context(nk(7, 2)));
  for (int x : t.indeterminacy)
    EXPECT_EQ(x, 0);
}

TEST(Report, InvariantsForSmallCodes) {
  std::vector<GeneticCode> codes;
  for (int n = 4; n <= 6; ++n)
    for (const auto &c : enumerate_codes(n))
      codes.push_back(c);
  auto serial = immersion_reports(codes, 1);
  auto parallel = immersion_reports(codes, 4);
  ASSERT_EQ(serial.size(), codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const auto &r = serial[i];
    EXPECT_EQ(r.code, codes[i]);
    EXPECT_EQ(r.nonimmersion_dim, parallel[i].nonimmersion_dim);
    EXPECT_GE(r.nonimmersion_dim, r.M_formula_dim) << r.code.str();
    EXPECT_GE(r.M_formula_dim, r.sw_dim) << r.code.str();
    EXPECT_LE(r.nonimmersion_dim, 4 * r.m - 1) << r.code.str();
    EXPECT_GE(r.nonimmersion_dim, 2 * r.m - 1) << r.code.str();
    if (r.gamma_gap > 0) {
      EXPECT_GE(r.nonimmersion_dim, 2 * r.m + 1) << r.code.str();
    }
    EXPECT_EQ(r.immerses_4m_minus_2.has_value(), r.n >= 5);
    EXPECT_EQ(genetic_code(LengthVector(r.lengths)), r.code);
  }
}
