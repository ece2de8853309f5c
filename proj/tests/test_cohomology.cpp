#include "polyspace/cohomology.hpp"

#include <gtest/gtest.h>

using namespace polyspace;

namespace {

GeneticCode nk(int n, int k) { return GeneticCode(n, {SubsetMask::of({n, k})}); }
GeneticCode nk1(int n, int k) { return GeneticCode(n, {SubsetMask::of({n, k, 1})}); }

CohInt mono(const CohContextPtr &ctx, int r, std::initializer_list<int> v, long c = 1) {
  return CohInt::monomial(ctx, CohMonomial{r, v.size() ? SubsetMask::of(v) : SubsetMask()}, Integer(c));
}

// Betti numbers from subgee counts g_j:  b_d = Σ_{j<=d} (g_j - g_{m+1-j}).
std::vector<int> betti_from_subgees(const GeneticCode &code) {
  SubgeeLattice lat(code);
  const int m = code.m();
  std::vector<int> g(static_cast<std::size_t>(m + 3), 0);
  for (auto s : lat.subgees())
    ++g[static_cast<std::size_t>(s.size())];
  std::vector<int> b;
  int acc = 0;
  for (int d = 0; d <= m; ++d) {
    acc += g[static_cast<std::size_t>(d)] - (m + 1 - d >= 0 ? g[static_cast<std::size_t>(m + 1 - d)] : 0);
    b.push_back(acc);
  }
  return b;
}

} // namespace

TEST(Cohomology, FiveTwo) {
  auto ctx = build_context(nk(5, 2));
  EXPECT_EQ(ctx->betti_numbers(), (std::vector<int>{1, 3, 1}));
  ASSERT_EQ(ctx->grading(2).basis.size(), 1u);
  EXPECT_EQ(ctx->grading(2).basis[0].str(), "R*V2");
  auto R = CohInt::R(ctx);
  EXPECT_EQ(R * R, mono(ctx, 1, {2}, -1));
  auto c = chern_normal(ctx);
  EXPECT_EQ(c, CohInt::one(ctx) - R * Integer(3) - CohInt::V(ctx, 1) * Integer(2) - CohInt::V(ctx, 2) * Integer(2) +
                   mono(ctx, 1, {2}, 2));
  // c_2(η) ≡ 2R^2 mod 4
  EXPECT_EQ(reduce_mod(c.component(2), 4), reduce_mod(R * R * Integer(2), 4));
}

TEST(Cohomology, KnownBettiNumbers) {
  EXPECT_EQ(build_context(GeneticCode::parse("{{6,3,1}}"))->betti_numbers(), (std::vector<int>{1, 4, 4, 1}));
  EXPECT_EQ(build_context(GeneticCode::parse("{{7,6,5}}"))->betti_numbers(), (std::vector<int>{1, 7, 22, 7, 1}));
  EXPECT_EQ(build_context(GeneticCode::parse("{{4}}"))->betti_numbers(), (std::vector<int>{1, 1}));
  EXPECT_THROW(build_context(GeneticCode(5, {})), ValidationError);
}

TEST(Cohomology, BettiMatchesSubgeeCountsAndPoincareDuality) {
  for (int n = 4; n <= 7; ++n)
    for (const auto &code : enumerate_codes(n)) {
      auto ctx = build_context(code);
      auto b = ctx->betti_numbers();
      const int m = ctx->m();
      EXPECT_EQ(b, betti_from_subgees(code)) << code.str();
      for (int d = 0; d <= m; ++d)
        EXPECT_EQ(b[static_cast<std::size_t>(d)], b[static_cast<std::size_t>(m - d)]) << code.str();
      EXPECT_TRUE(ctx->torsion_free()) << code.str();
      EXPECT_EQ(ctx->betti(m + 1), 0);
    }
}

TEST(Cohomology, ProductsAreAssociativeAndCommutative) {
  auto ctx = build_context(GeneticCode::parse("{{7,5},{7,4,3,2}}"));
  std::vector<CohInt> gens{CohInt::R(ctx)};
  for (int i = 1; i <= ctx->k(); ++i)
    gens.push_back(CohInt::V(ctx, i));
  for (const auto &a : gens)
    for (const auto &b : gens) {
      EXPECT_EQ(a * b, b * a);
      for (const auto &c : gens)
        EXPECT_EQ((a * b) * c, a * (b * c));
    }
}

TEST(Cohomology, ChernTangentTimesNormal) {
  for (int n = 5; n <= 7; ++n)
    for (const auto &code : enumerate_codes(n)) {
      auto ctx = build_context(code);
      EXPECT_EQ(chern_tangent(ctx) * chern_normal(ctx), CohInt::one(ctx)) << code.str();
      // c_1(τ) = (m+1)R + 2ΣV_i
      auto c1 = chern_tangent(ctx).component(1);
      auto expect = CohInt::R(ctx) * Integer(ctx->m() + 1);
      for (int i = 1; i <= ctx->k(); ++i)
        expect += CohInt::V(ctx, i) * Integer(2);
      EXPECT_EQ(c1, expect);
    }
}

TEST(Cohomology, FamilyPresentations) {
  for (int n = 5; n <= 9; ++n) {
    for (int k = 1; k < n; ++k) {
      auto r = relation_check_family(build_context(nk(n, k)));
      EXPECT_TRUE(r.ok()) << n << "," << k << ": " << (r.failed.empty() ? "" : r.failed.front());
    }
    for (int k = 2; k < n; ++k) {
      auto r = relation_check_family(build_context(nk1(n, k)));
      EXPECT_TRUE(r.ok()) << n << "," << k << ",1: " << (r.failed.empty() ? "" : r.failed.front());
    }
  }
  EXPECT_THROW(relation_check_family(build_context(GeneticCode::parse("{{7,6,5}}"))), ValidationError);
}

TEST(Cohomology, Nk1TopRelations) {
  const int n = 8, k = 5, m = n - 3;
  auto ctx = build_context(nk1(n, k));
  auto R = CohInt::R(ctx);
  auto V = [&](int i) { return CohInt::V(ctx, i); };
  EXPECT_EQ(pow(R, static_cast<unsigned>(m - 1)), pow(V(k), static_cast<unsigned>(m - 1)) * Integer((m - 1) % 2 ? -(k - 2) : (k - 2)));
  EXPECT_TRUE(pow(R, static_cast<unsigned>(m)).is_zero());
  EXPECT_EQ(pow(V(1), static_cast<unsigned>(m)), V(1) * pow(V(k), static_cast<unsigned>(m - 1)) * Integer(k - 2));
  EXPECT_EQ(V(1) * pow(V(2), static_cast<unsigned>(m - 1)), V(1) * pow(V(k), static_cast<unsigned>(m - 1)));
}

TEST(SteenrodSquare, CartanOracle) {
  // Sq^2 of a product of degree-2 generators g_1...g_d is Σ_j g_1...g_j^2...g_d.
  auto ctx = build_context(GeneticCode::parse("{{7,6,5}}"));
  std::vector<CohInt> gens{CohInt::R(ctx)};
  for (int i = 1; i <= ctx->k(); ++i)
    gens.push_back(CohInt::V(ctx, i));
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a; b < gens.size(); ++b)
      for (std::size_t c = b; c < gens.size(); ++c) {
        auto x = gens[a] * gens[b] * gens[c];
        auto cartan = gens[a] * gens[a] * gens[b] * gens[c] + gens[a] * gens[b] * gens[b] * gens[c] +
                      gens[a] * gens[b] * gens[c] * gens[c];
        EXPECT_EQ(sq2(x), reduce_mod(cartan, 2));
      }
  EXPECT_THROW(sq2(CohInt::one(ctx) + CohInt::R(ctx)), ValidationError);
}

TEST(StiefelWhitney, NormalClassOfLargeFamily) {
  // (1+R)^{-17} mod 2 in a ring where R^i != 0 for i < 16
  auto ctx = build_context(nk(19, 1));
  auto w = sw_classes(ctx);
  int largest = -1;
  for (int i = 0; i < ctx->m(); ++i)
    if (w.normal.coefficient(CohMonomial{i, SubsetMask()}) != 0)
      largest = i;
  int from_binomials = -1;
  for (int i = 0; i < 16; ++i)
    if (binom(16 + i, i) % 2 != 0)
      from_binomials = i;
  EXPECT_EQ(from_binomials, 15);
  EXPECT_EQ(largest, 15);
  EXPECT_EQ(w.w2_normal, reduce_mod(CohInt::R(ctx) * Integer(17), 2));
  EXPECT_EQ(reduce_mod(w.tangent * w.normal, 2), CohInt::one(ctx));
}
