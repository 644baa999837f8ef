// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <json.hpp>

#include "dualsql/error.hpp"
#include "dualsql/harness.hpp"
#include "testkit.hpp"

namespace dualsql {
namespace {

TEST(Harness, ParsesTaskLines) {
  auto tasks = parse_tasks(R"({"id":"a","nlq":"q","literals":[{"type":"text","value":"x"},{"type":"number","value":3}],"gold_sql":"SELECT name FROM actor","db":"movies"}

{"id":"b","nlq":"q2","gold_sql":"SELECT name FROM movies","db":"movies","tsq":{"types":["text"]}}
)");
  ASSERT_EQ(tasks.size(), 2u);
  EXPECT_EQ(tasks[0].literals, (std::vector<Literal>{Value("x"), Value(3.0)}));
  EXPECT_FALSE(tasks[0].tsq);
  ASSERT_TRUE(tasks[1].tsq);
  EXPECT_EQ(parse_tasks(task_to_json(tasks[0]))[0].literals, tasks[0].literals);
}

TEST(Harness, ReportsLineNumberOfBadTask) {
  try {
    parse_tasks("{\"id\":\"a\",\"nlq\":\"q\",\"gold_sql\":\"x\",\"db\":\"m\"}\n{\"id\":1}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Harness, ParsesTypedLiterals) {
  EXPECT_EQ(parse_literal("text:Tom Hanks"), Value("Tom Hanks"));
  EXPECT_EQ(parse_literal("number:1995"), Value(1995.0));
  EXPECT_EQ(parse_literal("text:a:b"), Value("a:b"));
  EXPECT_THROW(parse_literal("1995"), Error);
  EXPECT_THROW(parse_literal("number:abc"), Error);
  EXPECT_THROW(parse_literal("date:2020"), Error);
}

TEST(Harness, ClassifiesDifficulty) {
  auto ld = testkit::movies();
  auto q = [&](const char* s) { return classify(parse_gold(s, ld.catalog)); };
  EXPECT_EQ(q("SELECT name FROM actor ORDER BY name LIMIT 1"), Difficulty::kEasy);
  EXPECT_EQ(q("SELECT name FROM actor WHERE birth_yr > 1950"), Difficulty::kMedium);
  EXPECT_EQ(q("SELECT gender, COUNT(*) FROM actor GROUP BY gender"), Difficulty::kHard);
}

TEST(Harness, SynthesizedSketchesByDetail) {
  auto ld = testkit::movies();
  PartialQuery gold = parse_gold("SELECT name, year FROM movies WHERE year > 2010 ORDER BY year", ld.catalog);
  auto full = synthesize_tsq(gold, ld.catalog, ld.db, Detail::kFull, 9);
  ASSERT_TRUE(full.tsq);
  EXPECT_EQ(full.tsq->tuples.size(), 2u);
  EXPECT_TRUE(full.tsq->sorted);
  EXPECT_EQ(full.tsq->limit, 0);
  auto exec = ld.db.query(render_sql(gold, ld.catalog)).rows;
  ResultMeta meta{true, {SemanticType::kText, SemanticType::kNumber}};
  EXPECT_TRUE(satisfies(*full.tsq, exec, meta));
  // Same seed, same sketch.
  EXPECT_EQ(synthesize_tsq(gold, ld.catalog, ld.db, Detail::kFull, 9).tsq, full.tsq);

  auto partial = synthesize_tsq(gold, ld.catalog, ld.db, Detail::kPartial, 9);
  int empties = 0;
  for (const auto& cell : partial.tsq->tuples[0]) empties += cell.kind == ExampleCell::Kind::kEmpty;
  EXPECT_EQ(empties, 1);

  auto minimal = synthesize_tsq(gold, ld.catalog, ld.db, Detail::kMinimal, 9);
  EXPECT_TRUE(minimal.tsq->tuples.empty());
  EXPECT_EQ(minimal.tsq->types.size(), 2u);
  EXPECT_FALSE(synthesize_tsq(gold, ld.catalog, ld.db, Detail::kNone, 9).tsq);

  PartialQuery one = parse_gold("SELECT name FROM movies WHERE year = 2013", ld.catalog);
  EXPECT_TRUE(synthesize_tsq(one, ld.catalog, ld.db, Detail::kFull, 1).degenerate);
  PartialQuery none = parse_gold("SELECT name FROM movies WHERE year = 1800", ld.catalog);
  EXPECT_THROW(synthesize_tsq(none, ld.catalog, ld.db, Detail::kFull, 1), Error);
}

std::vector<Task> small_tasks() {
  return {
      {"t1", "Show the names of actors born before 1950", {Value(1950.0)},
       "SELECT name FROM actor WHERE birth_yr < 1950", "movies", std::nullopt},
      {"t2", "How many actors are there for each gender?", {},
       "SELECT gender, COUNT(*) FROM actor GROUP BY gender", "movies", std::nullopt},
  };
}

TEST(Harness, BenchmarkFindsGoldAndIsDeterministic) {
  BenchOptions opts;
  opts.data_root = testkit::data_dir();
  opts.enumeration.max_candidates = 50;
  opts.enumeration.timeout = std::chrono::milliseconds(20000);
  opts.record_timings = false;
  Report a = run_benchmark(small_tasks(), opts);
  ASSERT_EQ(a.tasks.size(), 2u);
  for (const auto& t : a.tasks) {
    EXPECT_GT(t.gold_rank, 0u) << t.id << " " << t.error;
    EXPECT_LE(t.probes_to_gold, t.probes);
  }
  EXPECT_EQ(a.buckets.at("all").tasks, 2u);
  EXPECT_EQ(a.tasks[1].difficulty, Difficulty::kHard);
  opts.jobs = 2;
  Report b = run_benchmark(small_tasks(), opts);
  EXPECT_EQ(report_to_json(a, false), report_to_json(b, false));
  auto j = nlohmann::json::parse(report_to_json(a, false));
  EXPECT_FALSE(j["tasks"][0].contains("seconds"));
  EXPECT_FALSE(report_table(a).empty());
}

TEST(Harness, BadGoldBecomesTaskError) {
  BenchOptions opts;
  opts.data_root = testkit::data_dir();
  Task bad{"x", "q", {}, "SELECT nope FROM actor", "movies", std::nullopt};
  Report r = run_benchmark({bad}, opts);
  EXPECT_EQ(r.tasks[0].termination, "error");
  EXPECT_FALSE(r.tasks[0].error.empty());
}

}  // namespace
}  // namespace dualsql
