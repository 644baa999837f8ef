// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "dualsql/catalog.hpp"
#include "dualsql/enumerator.hpp"
#include "dualsql/guidance.hpp"
#include "dualsql/joinpath.hpp"
#include "dualsql/tsq.hpp"
#include "dualsql/verifier.hpp"

namespace {

using namespace dualsql;

LoadedDatabase& movies() {
  static LoadedDatabase db = load_catalog(std::string(DUALSQL_DATA_DIR) + "/movies");
  return db;
}

const char* kNlq =
    "Show names of movies starring actors from before 1995, and those after 2000, with "
    "corresponding actor names, and years, from earliest to most recent.";

TableSketchQuery table_sketch() {
  return parse_tsq(
      R"({"types":["text","text","number"],"tuples":[[{"exact":"Forrest Gump"},{"exact":"Tom Hanks"},null],[{"exact":"Gravity"},{"exact":"Sandra Bullock"},{"range":[2010,2017]}]],"sorted":false,"limit":0})");
}

void BM_SteinerTrees(benchmark::State& state) {
  SchemaGraph graph(movies().catalog);
  std::vector<TableId> terminals{0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(steiner_trees(terminals, graph));
}
BENCHMARK(BM_SteinerTrees);

void BM_ScoreSelectColumns(benchmark::State& state) {
  auto model = lexical_model();
  GuidanceContext ctx;
  ctx.catalog = &movies().catalog;
  ctx.nlq = kNlq;
  PartialQuery root = new_root();
  DecisionPoint point{Module::kCol, Slot::kSelect, 0};
  for (auto _ : state) benchmark::DoNotOptimize(score_choices(*model, ctx, root, point));
}
BENCHMARK(BM_ScoreSelectColumns);

void BM_RenderExecutable(benchmark::State& state) {
  auto& src = movies();
  PartialQuery q = parse_gold(
      "SELECT m.name, a.name, m.year FROM actor a JOIN starring s ON a.aid = s.aid JOIN movies m "
      "ON s.mid = m.mid WHERE a.gender = 'male' AND m.year < 1995 OR m.year > 2000",
      src.catalog);
  for (auto _ : state) benchmark::DoNotOptimize(render_sql(q, src.catalog));
}
BENCHMARK(BM_RenderExecutable);

void BM_EnumerateMotivatingExample(benchmark::State& state) {
  auto& src = movies();
  auto model = lexical_model();
  ValueIndex index = build_value_index(src.catalog, src.db);
  TaskInputs inputs{kNlq, {Value("male"), Value(1995.0), Value(2000.0)}, table_sketch()};
  EnumConfig cfg;
  cfg.max_candidates = 1;
  cfg.timeout = std::chrono::seconds(30);
  for (auto _ : state) {
    Enumerator en(src.catalog, src.db, *model, &index);
    benchmark::DoNotOptimize(en.run(inputs, cfg, [](const Candidate&) {}));
  }
}
BENCHMARK(BM_EnumerateMotivatingExample)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
