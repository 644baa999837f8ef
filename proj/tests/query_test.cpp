// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "dualsql/error.hpp"
#include "dualsql/joinpath.hpp"
#include "dualsql/query.hpp"
#include "testkit.hpp"

namespace dualsql {
namespace {

class QueryTest : public ::testing::Test {
 protected:
  const SchemaCatalog& cat() const { return ld_.catalog; }
  ColumnId col(const char* t, const char* c) const { return cat().column_id(t, c); }
  PartialQuery parse(std::string_view sql) const { return parse_gold(sql, cat()); }
  LoadedDatabase ld_ = testkit::movies();
};

TEST_F(QueryTest, RootHasOnlySelectColumnHole) {
  PartialQuery root = new_root();
  auto h = holes(root);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0], (DecisionPoint{Module::kCol, Slot::kSelect, 0}));
  EXPECT_FALSE(is_complete(root));
  EXPECT_EQ(render_sql(root, cat(), RenderMode::kDisplay), "SELECT ?");
  EXPECT_THROW(render_sql(root, cat()), DecisionError);
}

TEST_F(QueryTest, ScheduleOrderAfterSelect) {
  PartialQuery pq = apply_decision(new_root(), cat(), {Module::kCol, Slot::kSelect, 0},
                                   std::vector<ColumnId>{col("actor", "name"), col("actor", "birth_yr")});
  auto h = holes(pq);
  ASSERT_EQ(h.size(), 4u);
  EXPECT_EQ(h[0].module, Module::kJoin);
  EXPECT_EQ(h[1], (DecisionPoint{Module::kAgg, Slot::kSelect, 0}));
  EXPECT_EQ(h[2], (DecisionPoint{Module::kAgg, Slot::kSelect, 1}));
  EXPECT_EQ(h[3].module, Module::kKw);
}

TEST_F(QueryTest, ApplyRejectsOutOfOrderDecision) {
  PartialQuery pq = new_root();
  EXPECT_THROW(apply_decision(pq, cat(), {Module::kKw, Slot::kClauses, 0}, ClauseSet{}), DecisionError);
  EXPECT_THROW(apply_decision(pq, cat(), {Module::kCol, Slot::kSelect, 0}, Agg::kMax), DecisionError);
}

TEST_F(QueryTest, ColumnDecisionClearsStaleJoinPath) {
  PartialQuery pq = apply_decision(new_root(), cat(), {Module::kCol, Slot::kSelect, 0},
                                   std::vector<ColumnId>{col("actor", "name")});
  JoinPath single{{*cat().find_table("actor")}, {}};
  pq = apply_decision(pq, cat(), holes(pq)[0], single);
  EXPECT_TRUE(pq.join_path.has_value());
  pq = apply_decision(pq, cat(), holes(pq)[0], Agg::kNone);
  pq = apply_decision(pq, cat(), holes(pq)[0], ClauseSet{true, false, false});
  // A WHERE column on another table changes the referenced set.
  pq = apply_decision(pq, cat(), holes(pq)[0], std::vector<ColumnId>{col("movies", "year")});
  EXPECT_FALSE(pq.join_path.has_value());
  EXPECT_EQ(holes(pq)[0].module, Module::kJoin);
  EXPECT_EQ(referenced_tables(pq, cat()).size(), 2u);
}

TEST_F(QueryTest, ReplayOfDerivedDecisionsRebuildsQuery) {
  PartialQuery gold = parse("SELECT name, birth_yr FROM actor WHERE gender = 'male' ORDER BY birth_yr DESC LIMIT 2");
  DecisionTrace trace;
  PartialQuery pq = new_root();
  auto decide = [&](const Choice& c) {
    auto p = *next_decision(pq);
    trace.push_back({p, c, 1.0});
    pq = apply_decision(pq, cat(), p, c);
  };
  decide(std::vector<ColumnId>{col("actor", "name"), col("actor", "birth_yr")});
  decide(JoinPath{{*cat().find_table("actor")}, {}});
  decide(Agg::kNone);
  decide(Agg::kNone);
  decide(ClauseSet{true, false, true});
  decide(std::vector<ColumnId>{col("actor", "gender")});
  decide(CmpOp::kEq);
  decide(PredicateValue{Value("male"), std::nullopt});
  decide(std::vector<ColumnId>{col("actor", "birth_yr")});
  decide(Agg::kNone);
  decide(OrderTail{Direction::kDesc, 2});
  ASSERT_TRUE(is_complete(pq));
  EXPECT_TRUE(canonical_eq(pq, gold, cat()));
  EXPECT_EQ(replay(trace, cat()), pq);
  EXPECT_EQ(render_sql(pq, cat()),
            "SELECT name, birth_yr FROM actor WHERE gender = 'male' ORDER BY birth_yr DESC LIMIT 2");
}

TEST_F(QueryTest, RendersJoinsWithBreadthFirstAliases) {
  PartialQuery q = parse(
      "SELECT m.name, a.name FROM movies m JOIN starring s ON s.mid = m.mid JOIN actor a ON a.aid = s.aid "
      "WHERE a.gender = 'female'");
  EXPECT_EQ(render_sql(q, cat()),
            "SELECT t3.name, t1.name FROM actor AS t1 JOIN starring AS t2 ON t1.aid = t2.aid "
            "JOIN movies AS t3 ON t2.mid = t3.mid WHERE t1.gender = 'female'");
}

TEST_F(QueryTest, CanonicalKeyIgnoresAliasesAndPredicateOrder) {
  auto a = parse("SELECT a.name FROM actor a JOIN starring s ON a.aid = s.aid WHERE a.gender = 'male' AND a.birth_yr > 1950");
  auto b = parse("SELECT x.name FROM starring y JOIN actor x ON y.aid = x.aid WHERE x.birth_yr > 1950 AND x.gender = 'male'");
  auto c = parse("SELECT a.name FROM actor a JOIN starring s ON a.aid = s.aid WHERE a.gender = 'male' OR a.birth_yr > 1950");
  EXPECT_TRUE(canonical_eq(a, b, cat()));
  EXPECT_FALSE(canonical_eq(a, c, cat()));
  EXPECT_NE(structural_key(a), structural_key(c));
}

TEST_F(QueryTest, SelectOrderIsSignificant) {
  auto a = parse("SELECT name, birth_yr FROM actor");
  auto b = parse("SELECT birth_yr, name FROM actor");
  EXPECT_FALSE(canonical_eq(a, b, cat()));
}

TEST_F(QueryTest, DistinctDoesNotParticipate) {
  auto a = parse("SELECT DISTINCT name FROM actor");
  auto b = parse("SELECT name FROM actor");
  EXPECT_TRUE(canonical_eq(a, b, cat()));
}

TEST_F(QueryTest, ParseRoundTripsThroughRenderer) {
  for (const char* sql : {
           "SELECT name FROM actor WHERE birth_yr BETWEEN 1950 AND 1960 ORDER BY name DESC LIMIT 3",
           "SELECT t1.name, COUNT(*) FROM actor AS t1 JOIN starring AS t2 ON t1.aid = t2.aid GROUP BY t1.name HAVING COUNT(*) >= 2",
           "SELECT name FROM actor WHERE name LIKE '%Tom%'",
           "SELECT MAX(revenue), MIN(year) FROM movies",
           "SELECT name FROM movies WHERE year < 1995 OR year > 2000",
       }) {
    PartialQuery q = parse(sql);
    ASSERT_TRUE(is_complete(q)) << sql;
    EXPECT_TRUE(canonical_eq(parse(render_sql(q, cat())), q, cat())) << sql;
  }
}

TEST_F(QueryTest, ParseRejectsOutOfScope) {
  EXPECT_THROW(parse("SELECT name FROM actor UNION SELECT name FROM movies"), ScopeError);
  EXPECT_THROW(parse("SELECT name FROM actor WHERE aid IN (SELECT aid FROM starring)"), ScopeError);
  EXPECT_THROW(parse("SELECT m.name FROM actor a JOIN movies m ON a.aid = m.mid"), ScopeError);
  EXPECT_THROW(parse("SELECT a.name FROM actor a JOIN starring s ON a.aid = s.aid JOIN movies m ON s.mid = m.mid "
                     "WHERE a.gender = 'male' AND (m.year < 1995 OR m.year > 2000)"),
               ScopeError);
}

TEST_F(QueryTest, UsedAndUnconsumedConstants) {
  auto q = parse("SELECT name FROM actor WHERE birth_yr BETWEEN 1950 AND 1960 ORDER BY name LIMIT 3");
  auto used = used_constants(q);
  EXPECT_EQ(used.size(), 3u);
  auto left = unconsumed_literals(q, {Value(1950.0), Value(1950.0), Value("Tom Hanks")});
  ASSERT_EQ(left.size(), 2u);
  EXPECT_EQ(left[0], Value(1950.0));
  EXPECT_EQ(left[1], Value("Tom Hanks"));
}

TEST_F(QueryTest, ExecutableRenderKeepsOnlyImpliedWhere) {
  // Both connectives are AND, so the decided conjunct holds for every
  // completion of the open value.
  auto q = parse("SELECT name FROM actor WHERE gender = 'male' AND birth_yr > 1950");
  PartialQuery partial = q;
  (*partial.where)[1].value.reset();
  SqlRenderer r(cat(), partial, RenderMode::kExecutable);
  auto body = r.where_body();
  ASSERT_TRUE(body.has_value());
  EXPECT_EQ(*body, "gender = 'male'");
}

}  // namespace
}  // namespace dualsql
