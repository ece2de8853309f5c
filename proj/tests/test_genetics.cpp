#include "polyspace/genetics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace polyspace;

namespace {

// S <= T iff |S| <= |T| and the i-th largest element of S is at most the
// i-th largest element of T.
bool leq_oracle(SubsetMask s, SubsetMask t) {
  auto a = s.descending(), b = t.descending();
  if (a.size() > b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i])
      return false;
  return true;
}

Rational subset_sum(const std::vector<Rational> &l, SubsetMask s) {
  Rational out;
  for (int i : s.ascending())
    out += l[static_cast<std::size_t>(i - 1)];
  return out;
}

// Maximal short sets containing n, by exhaustive search.
std::set<std::uint32_t> code_oracle(const std::vector<Rational> &l) {
  const int n = static_cast<int>(l.size());
  Rational total;
  for (const auto &x : l)
    total += x;
  std::vector<SubsetMask> shorts;
  for (std::uint32_t m = 0; m < (1u << (n - 1)); ++m) {
    auto s = SubsetMask(m).with(n);
    if (subset_sum(l, s) * Rational(2) < total)
      shorts.push_back(s);
  }
  std::set<std::uint32_t> out;
  for (auto s : shorts) {
    bool maximal = true;
    for (auto t : shorts)
      if (t != s && leq_oracle(s, t))
        maximal = false;
    if (maximal)
      out.insert(s.bits());
  }
  return out;
}

std::vector<Rational> random_lengths(std::mt19937 &rng, int n) {
  std::uniform_int_distribution<int> d(1, 40);
  std::vector<Rational> l;
  for (int i = 0; i < n; ++i)
    l.push_back(Rational(Integer(d(rng)), Integer(4)));
  std::sort(l.begin(), l.end());
  return l;
}

bool generic(const std::vector<Rational> &l) {
  const int n = static_cast<int>(l.size());
  Rational total;
  for (const auto &x : l)
    total += x;
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (subset_sum(l, SubsetMask(m)) * Rational(2) == total)
      return false;
  return true;
}

} // namespace

TEST(Order, MatchesOracle) {
  for (std::uint32_t a = 0; a < 256; ++a)
    for (std::uint32_t b = 0; b < 256; ++b)
      ASSERT_EQ(leq_sets(SubsetMask(a), SubsetMask(b)), leq_oracle(SubsetMask(a), SubsetMask(b)));
  EXPECT_TRUE(leq_sets(SubsetMask::of({7, 4}), SubsetMask::of({7, 6, 1})));
  EXPECT_FALSE(leq_sets(SubsetMask::of({7, 5}), SubsetMask::of({7, 4, 3, 2})));
}

TEST(Order, CoversAreCovers) {
  const int n = 7;
  for (std::uint32_t a = 0; a < (1u << n); ++a) {
    SubsetMask s(a);
    std::set<std::uint32_t> expect;
    for (std::uint32_t b = 0; b < (1u << n); ++b) {
      SubsetMask t(b);
      if (t == s || !leq_oracle(s, t))
        continue;
      bool cover = true;
      for (std::uint32_t c = 0; c < (1u << n) && cover; ++c) {
        SubsetMask u(c);
        if (u != s && u != t && leq_oracle(s, u) && leq_oracle(u, t))
          cover = false;
      }
      if (cover)
        expect.insert(b);
    }
    std::set<std::uint32_t> got;
    for (auto t : upper_covers(s, n))
      got.insert(t.bits());
    ASSERT_EQ(got, expect) << s.str();
    for (auto t : upper_covers(s, n)) {
      auto lc = lower_covers(t);
      EXPECT_NE(std::find(lc.begin(), lc.end(), s), lc.end());
    }
  }
}

TEST(GeneticCode, Examples) {
  EXPECT_EQ(genetic_code(LengthVector::parse("1,1,2,2,3")).str(), "{{5,2}}");
  EXPECT_EQ(genetic_code(LengthVector::parse("1/2,1,1,2,2,3")).str(), "{{6,3,1}}");
  EXPECT_EQ(genetic_code(LengthVector::parse("1,1,1,1,1,1,1")).str(), "{{7,6,5}}");
  EXPECT_EQ(genetic_code(LengthVector::parse("1,1,1,1,1")).str(), "{{5,4}}");
}

TEST(GeneticCode, NonGenericRejected) {
  EXPECT_THROW(genetic_code(LengthVector::parse("1,1,1,1")), GenericityError);
  EXPECT_THROW(LengthVector::parse("1,1"), ValidationError);
  EXPECT_THROW(LengthVector::parse("1,0,1"), ValidationError);
  EXPECT_THROW(LengthVector::parse("1,-1,3"), ValidationError);
}

TEST(GeneticCode, ParseErrorsCarryPosition) {
  try {
    GeneticCode::parse("{{7,4},{7,x}}");
    FAIL();
  } catch (const ValidationError &e) {
    EXPECT_NE(std::string(e.what()).find("position 10"), std::string::npos) << e.what();
  }
  EXPECT_THROW(GeneticCode::parse("{{7,4}"), ValidationError);
  EXPECT_THROW(GeneticCode::parse("{}"), ValidationError);
  EXPECT_TRUE(GeneticCode::parse("{}", 5).empty());
  // not an antichain: {7,4} <= {7,6,1}
  EXPECT_THROW(GeneticCode::parse("{{7,4},{7,6,1}}"), ValidationError);
  EXPECT_EQ(GeneticCode::parse(" { {7, 5} , {7,4,3,2} } ").str(), "{{7,5},{7,4,3,2}}");
}

TEST(GeneticCode, RandomVectorsAgainstOracle) {
  std::mt19937 rng(99);
  int tested = 0;
  while (tested < 300) {
    int n = 3 + static_cast<int>(rng() % 6);
    auto l = random_lengths(rng, n);
    if (!generic(l))
      continue;
    ++tested;
    auto code = genetic_code(LengthVector(l));
    std::set<std::uint32_t> got;
    for (auto g : code.genes())
      got.insert(g.bits());
    ASSERT_EQ(got, code_oracle(l)) << LengthVector(l).str();
  }
}

TEST(GeneticCode, ShortSetsAreDownClosed) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto l = random_lengths(rng, 7);
    if (!generic(l))
      continue;
    LengthVector lv(l);
    for (std::uint32_t a = 0; a < 128; ++a)
      for (std::uint32_t b = 0; b < 128; ++b)
        if (leq_oracle(SubsetMask(a), SubsetMask(b)) && is_short(lv, SubsetMask(b))) {
          ASSERT_TRUE(is_short(lv, SubsetMask(a)));
        }
  }
}

TEST(Subgees, MatchDefinition) {
  std::mt19937 rng(17);
  int tested = 0;
  while (tested < 100) {
    int n = 4 + static_cast<int>(rng() % 5);
    auto l = random_lengths(rng, n);
    if (!generic(l))
      continue;
    LengthVector lv(l);
    auto code = genetic_code(lv);
    if (code.empty())
      continue;
    ++tested;
    SubgeeLattice lat(code);
    std::set<std::uint32_t> expect, got;
    for (std::uint32_t t = 0; t < (1u << (n - 1)); ++t)
      if (is_short(lv, SubsetMask(t).with(n)))
        expect.insert(t);
    for (auto s : lat.subgees())
      got.insert(s.bits());
    ASSERT_EQ(got, expect);
    int k = 0;
    for (int i = 1; i < n; ++i)
      if (expect.count(SubsetMask::singleton(i).bits()))
        k = i;
    EXPECT_EQ(lat.k(), k);
  }
}

TEST(Realize, RoundTripCorpus) {
  std::mt19937 rng(31337);
  int tested = 0;
  while (tested < 50) {
    int n = 4 + static_cast<int>(rng() % 6);
    auto l = random_lengths(rng, n);
    if (!generic(l))
      continue;
    auto code = genetic_code(LengthVector(l));
    if (code.empty())
      continue;
    ++tested;
    auto r = realize(code);
    ASSERT_TRUE(std::holds_alternative<LengthVector>(r)) << code.str();
    EXPECT_EQ(genetic_code(std::get<LengthVector>(r)), code);
  }
}

TEST(Realize, AntichainsForFive) {
  // every nonempty antichain of sets containing 5 either realizes to
  // itself or carries a non-positive margin; realizable ones are exactly
  // the enumerated codes
  const int n = 5;
  std::vector<SubsetMask> sets;
  for (std::uint32_t m = 0; m < 16; ++m)
    sets.push_back(SubsetMask(m).with(n));
  std::set<std::string> realizable;
  int unrealizable = 0;
  for (std::uint32_t pick = 1; pick < (1u << sets.size()); ++pick) {
    std::vector<SubsetMask> genes;
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (pick >> i & 1u)
        genes.push_back(sets[i]);
    bool antichain = true;
    for (auto a : genes)
      for (auto b : genes)
        if (a != b && leq_oracle(a, b))
          antichain = false;
    if (!antichain)
      continue;
    GeneticCode code(n, genes);
    auto r = realize(code);
    if (auto *u = std::get_if<Unrealizable>(&r)) {
      ++unrealizable;
      EXPECT_LE(u->best_margin.sign(), 0);
    } else {
      realizable.insert(code.str());
    }
  }
  std::set<std::string> enumerated;
  for (const auto &c : enumerate_codes(n))
    enumerated.insert(c.str());
  EXPECT_EQ(realizable, enumerated);
  EXPECT_GT(unrealizable, 0);
}

TEST(Enumerate, PublishedCounts) {
  EXPECT_EQ(enumerate_codes(3).size(), 1u);
  EXPECT_EQ(enumerate_codes(4).size(), 2u);
  EXPECT_EQ(enumerate_codes(5).size(), 6u);
  EXPECT_EQ(enumerate_codes(6).size(), 20u);
  EXPECT_EQ(enumerate_codes(7).size(), 134u);
  EXPECT_THROW(enumerate_codes(2), UnsupportedRange);
  EXPECT_THROW(enumerate_codes(10), UnsupportedRange);
}

TEST(Enumerate, ThreadCountInvariant) {
  auto a = enumerate_codes(7, 1), b = enumerate_codes(7, 5);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
}

TEST(Enumerate, GridOracle) {
  // integer length vectors with entries 1..7 hit every code for n = 4, 5
  for (int n : {4, 5}) {
    std::set<std::string> seen;
    std::vector<int> v(static_cast<std::size_t>(n), 1);
    while (true) {
      std::vector<Rational> l(v.begin(), v.end());
      if (std::is_sorted(v.begin(), v.end()) && generic(l)) {
        auto code = genetic_code(LengthVector(l));
        if (!code.empty())
          seen.insert(code.str());
      }
      std::size_t i = 0;
      while (i < v.size() && ++v[i] > 7)
        v[i++] = 1;
      if (i == v.size())
        break;
    }
    std::set<std::string> enumerated;
    for (const auto &c : enumerate_codes(n))
      enumerated.insert(c.str());
    EXPECT_EQ(seen, enumerated) << "n=" << n;
  }
  std::set<std::string> four;
  for (const auto &c : enumerate_codes(4))
    four.insert(c.str());
  EXPECT_EQ(four, (std::set<std::string>{"{{4}}", "{{4,1}}"}));
}

TEST(Enumerate, EveryCodeRealizes) {
  for (int n = 4; n <= 7; ++n)
    for (const auto &code : enumerate_codes(n)) {
      auto r = realize(code);
      ASSERT_TRUE(std::holds_alternative<LengthVector>(r)) << code.str();
    }
}
