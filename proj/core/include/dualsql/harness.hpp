// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualsql/catalog.hpp"
#include "dualsql/enumerator.hpp"
#include "dualsql/guidance.hpp"
#include "dualsql/query.hpp"
#include "dualsql/tsq.hpp"

namespace dualsql {

struct Task {
  std::string id;
  std::string nlq;
  std::vector<Literal> literals;
  std::string gold_sql;
  std::string db;  // directory or database file, relative to the data root
  std::optional<TableSketchQuery> tsq;
};

// One JSON object per line; blank lines are skipped. Throws Error with the
// line number on malformed input.
std::vector<Task> parse_tasks(std::string_view jsonl);
std::vector<Task> load_tasks(const std::filesystem::path& path);
std::string task_to_json(const Task& task);

// Literal from the CLI form "text:Tom Hanks" or "number:1995".
Literal parse_literal(std::string_view typed);

enum class Detail { kFull, kPartial, kMinimal, kNone };
std::string_view to_string(Detail d);
Detail detail_from_string(std::string_view name);

enum class Difficulty { kEasy, kMedium, kHard };
std::string_view to_string(Difficulty d);
// Easy: project/join (+aggregate, sort, limit); Medium: adds selection
// predicates; Hard: adds grouping.
Difficulty classify(const PartialQuery& gold);

struct SynthesizedTsq {
  std::optional<TableSketchQuery> tsq;  // nullopt for Detail::kNone
  bool degenerate = false;              // fewer than two result rows
};

// Sketch derived from the gold query's result. Throws Error when the gold
// result is empty and tuples are needed.
SynthesizedTsq synthesize_tsq(const PartialQuery& gold, const SchemaCatalog& catalog,
                              Database& db, Detail detail, std::uint64_t seed);

struct BenchOptions {
  EnumConfig enumeration;
  Detail detail = Detail::kFull;
  std::uint64_t seed = 42;
  bool uniform_model = false;
  LexicalConfig lexical;
  // Halt a task once the gold query is emitted.
  bool stop_at_gold = false;
  // Match the gold by executed result instead of canonical form.
  bool execution_match = false;
  bool record_timings = true;
  int jobs = 1;
  std::chrono::milliseconds probe_timeout{2000};
  std::filesystem::path data_root;
  std::map<std::string, double> edge_weights;
};

struct TaskResult {
  std::string id;
  Difficulty difficulty = Difficulty::kEasy;
  std::size_t gold_rank = 0;  // 0 = not emitted
  std::size_t candidates = 0;
  std::size_t probes = 0;
  std::size_t probes_to_gold = 0;  // probes executed when the gold was emitted
  std::size_t expansions = 0;
  std::size_t tsq_tuples = 0;
  bool degenerate_tsq = false;
  double seconds = 0;
  std::string termination;
  std::string error;
};

struct BucketStats {
  std::size_t tasks = 0;
  std::size_t top1 = 0;
  std::size_t top10 = 0;
  std::size_t top100 = 0;
};

struct Report {
  std::string mode;
  std::string detail;
  std::string model;
  std::uint64_t seed = 0;
  std::vector<TaskResult> tasks;
  std::map<std::string, BucketStats> buckets;  // easy, medium, hard, all
};

Report run_benchmark(const std::vector<Task>& tasks, const BenchOptions& options);

std::string report_to_json(const Report& report, bool timings = true);
std::string report_table(const Report& report);

}  // namespace dualsql
