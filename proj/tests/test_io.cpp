#include "polyspace/io.hpp"

#include <gtest/gtest.h>

using namespace polyspace;

TEST(Json, CodeShape) {
  auto code = GeneticCode::parse("{{7,5},{7,4,3,2}}");
  EXPECT_EQ(io::to_json(code).dump(), R"({"n":7,"genes":[[7,5],[7,4,3,2]]})");
  EXPECT_EQ(io::code_from_json(io::to_json(code)), code);
  EXPECT_THROW(io::code_from_json(io::Json::parse(R"({"n":7})")), ValidationError);
  EXPECT_THROW(io::code_from_json(io::Json::parse(R"({"n":7,"genes":[[7,4],[7,6,1]]})")), ValidationError);
}

TEST(Json, RationalsAreStrings) {
  std::vector<Rational> l{Rational(1, 2), Rational(3)};
  EXPECT_EQ(io::to_json(l).dump(), R"(["1/2","3"])");
  EXPECT_EQ(io::rationals_from_json(io::to_json(l)), l);
  EXPECT_THROW(io::rationals_from_json(io::Json::parse("[0.5]")), ValidationError);
}

TEST(Catalog, ByteIdenticalRoundTrip) {
  auto reports = immersion_reports(enumerate_codes(6), 2);
  auto text = io::write_catalog(6, reports);
  auto back = io::read_catalog(text);
  EXPECT_EQ(back.n, 6);
  ASSERT_EQ(back.entries.size(), 20u);
  EXPECT_EQ(io::write_catalog(back.n, back.entries), text);
  auto j = io::Json::parse(text);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["entries"][0]["code"]["n"], 6);
}

TEST(Catalog, RejectsBadInput) {
  EXPECT_THROW(io::read_catalog("{"), ValidationError);
  EXPECT_THROW(io::read_catalog(R"({"schema":2,"n":5,"entries":[]})"), ValidationError);
  EXPECT_THROW(io::read_catalog(R"({"schema":1,"n":5,"entries":[{"code":{"n":5}}]})"), ValidationError);
}

TEST(Tsv, Table1Layout) {
  auto tsv = io::table1_tsv(table1({16, 17}, {1, 3}));
  EXPECT_EQ(tsv, "m/s\t1\t2\t3\n16\t61\t59\t57\n17\t63\t61\t61\n");
}

TEST(Json, KTheoryDump) {
  auto k = KRingContext::build(GeneticCode::parse("{{6,3,1}}"), KMode::FamilyNK1);
  auto j = io::ktheory_json(k, true);
  EXPECT_EQ(j["mode"], "family_nk1");
  EXPECT_EQ(j["ch_oracle_ok"], true);
  EXPECT_FALSE(j["relations"].empty());
}
