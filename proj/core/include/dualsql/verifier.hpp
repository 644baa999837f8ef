// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dualsql/catalog.hpp"
#include "dualsql/database.hpp"
#include "dualsql/query.hpp"
#include "dualsql/tsq.hpp"

namespace dualsql {

enum class Stage { kClauses, kSemantics, kColumnTypes, kByColumn, kByRow, kLiterals, kOrder, kResult };

enum class SemanticRule {
  kInconsistentPredicates,
  kConstantOutputColumn,
  kUngroupedAggregation,
  kSingletonGroups,
  kUnnecessaryGroupBy,
  kAggregateTypeUsage,
  kFaultyTypeComparison,
};

std::string_view to_string(Stage stage);
std::string_view to_string(SemanticRule rule);

struct VerificationOutcome {
  bool passed = true;
  std::optional<Stage> failed_stage;
  std::optional<SemanticRule> rule;  // set when failed at kSemantics
  int column = -1;                   // set when failed at kByColumn
  std::size_t probes_executed = 0;   // database round trips made by this call
};

bool verify_clauses(bool sorted, int limit, const PartialQuery& pq);
std::optional<SemanticRule> verify_semantics(const PartialQuery& pq, const SchemaCatalog& catalog);
bool verify_column_types(const std::vector<SemanticType>& types, const PartialQuery& pq,
                         const SchemaCatalog& catalog);
bool verify_literals(const PartialQuery& pq, const std::vector<Literal>& literals);
bool can_check_rows(const PartialQuery& pq);

// Type of each projected item, or nullopt while its aggregate is open.
std::vector<std::optional<SemanticType>> projected_types(const PartialQuery& pq,
                                                         const SchemaCatalog& catalog);

// Column-wise probe for select item `col`. nullopt means no probe applies
// (empty cell, COUNT/SUM, open aggregate, or AVG which uses a range check).
std::optional<std::string> build_cv_query(const PartialQuery& pq, const SchemaCatalog& catalog,
                                          std::size_t col, const ExampleCell& cell);
// Row-wise probe. Precondition: can_check_rows(pq).
std::string build_rv_query(const PartialQuery& pq, const SchemaCatalog& catalog,
                           const ExampleTuple& tuple);

// False when a cell can never match the item's type.
bool cell_type_compatible(const ExampleCell& cell, SemanticType type);

struct Execution {
  ResultSet result;
  ResultMeta meta;
};
Execution execute_query(const PartialQuery& pq, const SchemaCatalog& catalog, Database& db);

// Ascending-cost cascade bound to one task. Probe results are cached by SQL
// text; only cache misses count as executed probes.
class Verifier {
 public:
  Verifier(const SchemaCatalog& catalog, Database& db, std::optional<TableSketchQuery> tsq,
           std::vector<Literal> literals);

  VerificationOutcome verify(const PartialQuery& pq);

  bool verify_by_column(const PartialQuery& pq, VerificationOutcome& out);
  bool verify_by_row(const PartialQuery& pq, VerificationOutcome& out);
  bool verify_by_order(const PartialQuery& pq, VerificationOutcome& out);

  std::size_t probes_executed() const { return probes_; }
  const std::optional<TableSketchQuery>& tsq() const { return tsq_; }

 private:
  bool probe(const std::string& sql, VerificationOutcome& out);
  std::optional<std::pair<double, double>> column_range(ColumnId c, VerificationOutcome& out);
  const Execution& run_full(const PartialQuery& pq, VerificationOutcome& out);

  const SchemaCatalog& catalog_;
  Database& db_;
  std::optional<TableSketchQuery> tsq_;
  std::vector<Literal> literals_;
  std::unordered_map<std::string, bool> cache_;
  std::map<ColumnId, std::optional<std::pair<double, double>>> ranges_;
  std::string last_sql_;
  Execution last_exec_;
  std::size_t probes_ = 0;
};

// One-shot cascade with a fresh cache.
VerificationOutcome verify(const std::optional<TableSketchQuery>& tsq,
                           const std::vector<Literal>& literals, const PartialQuery& pq,
                           const SchemaCatalog& catalog, Database& db);

}  // namespace dualsql
