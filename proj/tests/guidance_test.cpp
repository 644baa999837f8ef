// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "dualsql/guidance.hpp"
#include "testkit.hpp"

namespace dualsql {
namespace {

class GuidanceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    index_ = build_value_index(ld_.catalog, ld_.db);
    ctx_.catalog = &ld_.catalog;
    ctx_.index = &index_;
    ctx_.nlq = std::string(testkit::kMotivatingNlq);
    ctx_.literals = testkit::motivating_literals();
  }
  ColumnId col(const char* t, const char* c) const { return ld_.catalog.column_id(t, c); }
  PartialQuery parse(std::string_view sql) const { return parse_gold(sql, ld_.catalog); }

  // Advances `pq` to the first hole of the given module.
  PartialQuery select_then_kw(std::vector<ColumnId> cols, ClauseSet kw) {
    PartialQuery pq = apply_decision(new_root(), ld_.catalog, {Module::kCol, Slot::kSelect, 0}, cols);
    while (true) {
      auto p = *next_decision(pq);
      if (p.module == Module::kJoin) {
        JoinPath jp{referenced_tables(pq, ld_.catalog), {}};
        if (jp.tables.size() > 1) {
          SchemaGraph g = join_graph(ld_.catalog);
          for (std::size_t i = 0; i < g.edges().size(); ++i) jp.edges.push_back(i);
        }
        pq = apply_decision(pq, ld_.catalog, p, jp);
      } else if (p.module == Module::kAgg) {
        pq = apply_decision(pq, ld_.catalog, p, Agg::kNone);
      } else {
        break;
      }
    }
    return apply_decision(pq, ld_.catalog, *next_decision(pq), kw);
  }

  LoadedDatabase ld_ = testkit::movies();
  ValueIndex index_;
  GuidanceContext ctx_;
};

TEST_F(GuidanceTest, SelectColumnsAreOrderedSequences) {
  auto choices = legal_choices(ctx_, new_root(), {Module::kCol, Slot::kSelect, 0});
  // 12 columns plus star, sequences of length 1..3 without repetition.
  std::size_t n = ld_.catalog.column_count() + 1;
  EXPECT_EQ(choices.size(), n + n * (n - 1) + n * (n - 1) * (n - 2));
}

TEST_F(GuidanceTest, WhereColumnsRespectLiteralTypes) {
  PartialQuery pq = select_then_kw({col("actor", "name")}, {true, false, false});
  auto choices = legal_choices(ctx_, pq, *next_decision(pq));
  // One text literal and two numbers: at most one text and two number
  // columns per multiset. Counted by brute force over all multisets.
  std::vector<ColumnId> pool;
  for (ColumnId c = 0; c < static_cast<ColumnId>(ld_.catalog.column_count()); ++c) pool.push_back(c);
  std::set<std::vector<ColumnId>> expect;
  for (ColumnId a : pool) {
    for (ColumnId b = -1; b < static_cast<ColumnId>(pool.size()); ++b) {
      for (ColumnId c = -1; c < static_cast<ColumnId>(pool.size()); ++c) {
        std::vector<ColumnId> s{a};
        if (b >= 0) s.push_back(b);
        if (c >= 0) s.push_back(c);
        if (b < 0 && c >= 0) continue;
        std::sort(s.begin(), s.end());
        int t = 0, num = 0;
        for (ColumnId x : s) (ld_.catalog.type_of(x) == SemanticType::kText ? t : num)++;
        if (t <= 1 && num <= 2) expect.insert(s);
      }
    }
  }
  std::set<std::vector<ColumnId>> got;
  for (const auto& ch : choices) got.insert(std::get<std::vector<ColumnId>>(ch));
  EXPECT_EQ(got.size(), choices.size());
  EXPECT_EQ(got, expect);
}

TEST_F(GuidanceTest, KeywordsNeedLiteralsForWhere) {
  ctx_.literals.clear();
  PartialQuery pq = apply_decision(new_root(), ld_.catalog, {Module::kCol, Slot::kSelect, 0},
                                   std::vector<ColumnId>{kStar});
  pq = apply_decision(pq, ld_.catalog, *next_decision(pq), JoinPath{{0}, {}});
  pq = apply_decision(pq, ld_.catalog, *next_decision(pq), Agg::kCount);
  auto choices = legal_choices(ctx_, pq, *next_decision(pq));
  EXPECT_EQ(choices.size(), 4u);
  for (const auto& c : choices) EXPECT_FALSE(std::get<ClauseSet>(c).where);
  ctx_.bound.max_group = 0;
  ctx_.bound.max_order = 0;
  EXPECT_EQ(legal_choices(ctx_, pq, *next_decision(pq)).size(), 1u);
}

TEST_F(GuidanceTest, OperatorsAndAggregatesFollowTypes) {
  EXPECT_EQ(operators_for(SemanticType::kText).size(), 3u);
  EXPECT_EQ(operators_for(SemanticType::kNumber).size(), 7u);
  EXPECT_EQ(aggregates_for(ld_.catalog, kStar), std::vector<Agg>{Agg::kCount});
  EXPECT_EQ(aggregates_for(ld_.catalog, col("actor", "name")).size(), 2u);
  EXPECT_EQ(aggregates_for(ld_.catalog, col("actor", "birth_yr")).size(), 6u);
}

TEST_F(GuidanceTest, BetweenOffersAscendingPairs) {
  ctx_.literals = {Value(2000.0), Value(1995.0), Value(1990.0)};
  PartialQuery pq = parse("SELECT name FROM movies WHERE year BETWEEN 1990 AND 1995");
  (*pq.where)[0].value.reset();
  auto choices = legal_choices(ctx_, pq, *next_decision(pq));
  ASSERT_EQ(choices.size(), 3u);
  for (const auto& c : choices) {
    const auto& v = std::get<PredicateValue>(c);
    ASSERT_TRUE(v.hi.has_value());
    EXPECT_LT(v.lo.number(), v.hi->number());
  }
}

TEST_F(GuidanceTest, NoOptionLeadsToAnUnfillableValue) {
  // One number for two numeric predicates: BETWEEN would strand the second.
  ctx_.literals = {Value(1995.0), Value(2000.0)};
  PartialQuery pq = parse("SELECT name FROM movies WHERE year = 1995 OR revenue = 2000");
  (*pq.where)[0].op.reset();
  (*pq.where)[1].op.reset();
  (*pq.where)[0].value.reset();
  (*pq.where)[1].value.reset();
  auto ops = legal_choices(ctx_, pq, {Module::kOp, Slot::kWhere, 0});
  EXPECT_EQ(std::count(ops.begin(), ops.end(), Choice(CmpOp::kBetween)), 0);
  EXPECT_EQ(ops.size(), 6u);

  ctx_.literals = {Value(1995.0), Value(1995.0), Value(2000.0)};
  (*pq.where)[0].op = CmpOp::kEq;
  (*pq.where)[1].op = CmpOp::kBetween;
  auto values = legal_choices(ctx_, pq, {Module::kValue, Slot::kWhere, 0});
  ASSERT_EQ(values.size(), 1u);
  EXPECT_EQ(std::get<PredicateValue>(values[0]).lo, Value(1995.0));
}

TEST_F(GuidanceTest, HavingTargetsAndLimits) {
  ctx_.literals = {Value(2.0)};
  ctx_.tsq_limit = 5;
  PartialQuery pq = parse(
      "SELECT a.name, COUNT(*) FROM actor a JOIN starring s ON a.aid = s.aid GROUP BY a.name "
      "HAVING COUNT(*) >= 2 ORDER BY a.name LIMIT 2");
  PartialQuery open = pq;
  open.having = HavingPredicate{};
  open.order_by.reset();
  open.order_tail.reset();
  auto targets = legal_choices(ctx_, open, *next_decision(open));
  // COUNT(*) plus five aggregates over each of the eight number columns.
  EXPECT_EQ(targets.size(), 1u + 5u * 8u);

  PartialQuery tail = pq;
  tail.order_tail.reset();
  tail.having.value = Value(7.0);
  auto limits = legal_choices(ctx_, tail, *next_decision(tail));
  std::set<int> ks;
  for (const auto& c : limits) ks.insert(std::get<OrderTail>(c).limit);
  EXPECT_EQ(ks, (std::set<int>{0, 1, 2, 5}));
  EXPECT_EQ(limits.size(), 8u);
}

TEST_F(GuidanceTest, ScoresAreNormalizedAndSorted) {
  auto model = lexical_model();
  for (auto* m : {model.get()}) {
    auto scored = score_choices(*m, ctx_, new_root(), {Module::kCol, Slot::kSelect, 0});
    double total = 0;
    for (std::size_t i = 0; i < scored.size(); ++i) {
      EXPECT_GT(scored[i].score, 0);
      total += scored[i].score;
      if (i) {
        EXPECT_GE(scored[i - 1].score, scored[i].score);
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
  auto uniform = uniform_model();
  auto flat = score_choices(*uniform, ctx_, new_root(), {Module::kCol, Slot::kSelect, 0});
  EXPECT_NEAR(flat.front().score, flat.back().score, 1e-15);
  EXPECT_NEAR(flat.front().score, 1.0 / static_cast<double>(flat.size()), 1e-15);
}

TEST_F(GuidanceTest, LexicalModelFollowsNlqCues) {
  auto model = lexical_model();
  PartialQuery pq = select_then_kw({col("movies", "name"), col("actor", "name"), col("movies", "year")},
                                   {true, false, true});
  auto where = score_choices(*model, ctx_, pq, *next_decision(pq));
  auto best = std::get<std::vector<ColumnId>>(where.front().choice);
  EXPECT_EQ(best, (std::vector<ColumnId>{col("actor", "gender"), col("movies", "year"), col("movies", "year")}));

  PartialQuery q = parse("SELECT name FROM movies ORDER BY year ASC");
  q.order_tail.reset();
  auto tails = score_choices(*model, ctx_, q, *next_decision(q));
  EXPECT_EQ(std::get<OrderTail>(tails.front().choice), (OrderTail{Direction::kAsc, 0}));
}

TEST(Tokenizer, LowercasesAndStripsPlurals) {
  EXPECT_EQ(tokenize_nlq("Show Names of movies, please!"),
            (std::vector<std::string>{"show", "name", "of", "movie", "please"}));
}

}  // namespace
}  // namespace dualsql
