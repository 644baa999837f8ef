// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "dualsql/error.hpp"
#include "dualsql/tsq.hpp"
#include "testkit.hpp"

namespace dualsql {
namespace {

const ResultMeta kUnsorted{false, {SemanticType::kText, SemanticType::kText, SemanticType::kNumber}};
const ResultMeta kSorted{true, {SemanticType::kText, SemanticType::kText, SemanticType::kNumber}};

Row row(const char* a, const char* b, double y) { return {Value(a), Value(b), Value(y)}; }

TEST(Tsq, ParsesSketchFixture) {
  auto tsq = parse_tsq(R"({"types":["text","text","number"],
    "tuples":[[{"exact":"Forrest Gump"},{"exact":"Tom Hanks"},null],
              [{"exact":"Gravity"},{"exact":"Sandra Bullock"},{"range":[2010,2017]}]],
    "sorted":false,"limit":0})");
  EXPECT_EQ(tsq, testkit::motivating_sketch());
  EXPECT_EQ(tsq.arity(), 3u);
  EXPECT_EQ(parse_tsq(tsq_to_json(tsq)), tsq);
}

TEST(Tsq, RejectsMalformed) {
  EXPECT_THROW(parse_tsq("not json"), TsqError);
  EXPECT_THROW(parse_tsq(R"({"types":["text"],"tuples":[[null, null]]})"), TsqError);
  EXPECT_THROW(parse_tsq(R"({"types":["text"],"tuples":[[{"range":[1,2]}]]})"), TsqError);
  EXPECT_THROW(parse_tsq(R"({"types":["color"]})"), TsqError);
  EXPECT_THROW(parse_tsq(R"({"limit":-1})"), TsqError);
}

TEST(Tsq, CellMatching) {
  EXPECT_FALSE(cell_matches(ExampleCell::empty(), Value::null()));
  EXPECT_TRUE(cell_matches(ExampleCell::empty(), Value("x")));
  EXPECT_TRUE(cell_matches(ExampleCell::exact(Value("Gravity")), Value("Gravity")));
  EXPECT_FALSE(cell_matches(ExampleCell::exact(Value("Gravity")), Value("gravity")));
  EXPECT_TRUE(cell_matches(ExampleCell::exact(Value(3.0)), Value(3.0)));
  EXPECT_TRUE(cell_matches(ExampleCell::range(2010, 2017), Value(2010.0)));
  EXPECT_TRUE(cell_matches(ExampleCell::range(2010, 2017), Value(2017.0)));
  EXPECT_FALSE(cell_matches(ExampleCell::range(2010, 2017), Value(2018.0)));
  EXPECT_FALSE(cell_matches(ExampleCell::range(2010, 2017), Value::null()));
  EXPECT_FALSE(cell_matches(ExampleCell::range(2010, 2017), Value("2013")));
}

TEST(Tsq, SatisfiedByMotivatingResult) {
  auto tsq = testkit::motivating_sketch();
  std::vector<Row> rows = {row("Forrest Gump", "Tom Hanks", 1994), row("Gravity", "Sandra Bullock", 2013),
                           row("Philadelphia", "Tom Hanks", 1993)};
  EXPECT_TRUE(satisfies(tsq, rows, kUnsorted));
  rows[1] = row("Gravity", "Sandra Bullock", 2009);
  EXPECT_FALSE(satisfies(tsq, rows, kUnsorted));
}

TEST(Tsq, TuplesNeedDistinctRows) {
  TableSketchQuery tsq;
  tsq.types = {SemanticType::kText};
  tsq.tuples = {{ExampleCell::exact(Value("a"))}, {ExampleCell::exact(Value("a"))}};
  ResultMeta meta{false, {SemanticType::kText}};
  EXPECT_FALSE(satisfies(tsq, {{Value("a")}}, meta));
  EXPECT_TRUE(satisfies(tsq, {{Value("a")}, {Value("a")}}, meta));
}

TEST(Tsq, SortedRequiresOrderByAndTupleOrder) {
  auto tsq = testkit::motivating_sketch(true);
  std::vector<Row> asc = {row("Forrest Gump", "Tom Hanks", 1994), row("Gravity", "Sandra Bullock", 2013)};
  std::vector<Row> desc = {asc[1], asc[0]};
  EXPECT_TRUE(satisfies(tsq, asc, kSorted));
  EXPECT_FALSE(satisfies(tsq, desc, kSorted));
  EXPECT_FALSE(satisfies(tsq, asc, kUnsorted));
  // Satisfaction alone tolerates an ORDER BY under an unsorted sketch.
  EXPECT_TRUE(satisfies(testkit::motivating_sketch(false), desc, kSorted));
}

TEST(Tsq, LimitBoundsRowCountAndTypesMustMatch) {
  TableSketchQuery tsq;
  tsq.types = {SemanticType::kNumber};
  tsq.sorted = true;
  tsq.limit = 2;
  ResultMeta meta{true, {SemanticType::kNumber}};
  EXPECT_TRUE(satisfies(tsq, {{Value(1.0)}, {Value(2.0)}}, meta));
  EXPECT_FALSE(satisfies(tsq, {{Value(1.0)}, {Value(2.0)}, {Value(3.0)}}, meta));
  EXPECT_FALSE(satisfies(tsq, {{Value(1.0)}}, ResultMeta{true, {SemanticType::kText}}));
}

TEST(Tsq, OrderedMatchBacktracks) {
  // Greedy first-match would pair tuple 0 with row 0 and strand tuple 1.
  std::vector<ExampleTuple> tuples = {{ExampleCell::empty()}, {ExampleCell::exact(Value("b"))}};
  std::vector<Row> rows = {{Value("b")}, {Value("a")}};
  EXPECT_FALSE(match_tuples(tuples, rows, true));
  rows = {{Value("a")}, {Value("b")}};
  EXPECT_TRUE(match_tuples(tuples, rows, true));
  std::vector<ExampleTuple> t2 = {{ExampleCell::exact(Value("b"))}, {ExampleCell::empty()}};
  EXPECT_TRUE(match_tuples(t2, {{Value("b")}, {Value("b")}}, false));
}

}  // namespace
}  // namespace dualsql
