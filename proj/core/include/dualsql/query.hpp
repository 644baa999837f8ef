// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dualsql/catalog.hpp"
#include "dualsql/value.hpp"

namespace dualsql {

enum class Agg { kNone, kMax, kMin, kSum, kCount, kAvg };
enum class CmpOp { kEq, kNe, kGt, kLt, kGe, kLe, kBetween, kLike };
enum class Connective { kAnd, kOr };
enum class Direction { kAsc, kDesc };

std::string_view to_string(Agg agg);
std::string_view to_string(CmpOp op);
std::string_view to_string(Connective c);
std::string_view to_string(Direction d);

struct ClauseSet {
  bool where = false;
  bool group_by = false;
  bool order_by = false;

  bool operator==(const ClauseSet&) const = default;
};

// A projected (or ordering) expression. `agg` is the AGG placeholder.
struct AggColumn {
  ColumnId column = kStar;
  std::optional<Agg> agg;

  bool operator==(const AggColumn&) const = default;
};

struct PredicateValue {
  Value lo;
  std::optional<Value> hi;  // BETWEEN upper bound

  bool operator==(const PredicateValue&) const = default;
};

struct Predicate {
  ColumnId column = 0;
  std::optional<CmpOp> op;
  std::optional<PredicateValue> value;

  bool operator==(const Predicate&) const = default;
  bool resolved() const { return op && value; }
};

struct HavingPredicate {
  std::optional<AggColumn> target;
  std::optional<CmpOp> op;
  std::optional<Value> value;

  bool operator==(const HavingPredicate&) const = default;
  bool resolved() const { return target && op && value; }
};

struct OrderTail {
  Direction direction = Direction::kAsc;
  int limit = 0;  // 0 = no LIMIT

  bool operator==(const OrderTail&) const = default;
};

// Tree of FK-PK joins. Both lists are kept sorted.
struct JoinPath {
  std::vector<TableId> tables;
  std::vector<std::size_t> edges;  // indices into SchemaCatalog::edges()

  bool operator==(const JoinPath&) const = default;
  auto operator<=>(const JoinPath&) const = default;
};

// SPJA query in which any element may still be a placeholder (nullopt).
//
// WHERE predicates form a flat list joined by per-gap connectives. Only the
// shape AND* OR* is reachable, so the list reads as one leading AND group
// followed by single-predicate disjuncts.
struct PartialQuery {
  std::optional<std::vector<AggColumn>> select;
  std::optional<ClauseSet> clauses;
  std::optional<std::vector<Predicate>> where;
  std::vector<std::optional<Connective>> connectives;
  std::optional<std::vector<ColumnId>> group_by;
  std::optional<bool> has_having;
  HavingPredicate having;
  std::optional<std::vector<AggColumn>> order_by;
  std::optional<OrderTail> order_tail;
  std::optional<JoinPath> join_path;

  bool operator==(const PartialQuery&) const = default;
};

enum class Module { kKw, kCol, kOp, kAgg, kAndOr, kDescAsc, kHaving, kValue, kJoin };
enum class Slot { kSelect, kClauses, kWhere, kGroupBy, kHaving, kOrderBy, kFrom };

std::string_view to_string(Module m);
std::string_view to_string(Slot s);

struct DecisionPoint {
  Module module = Module::kCol;
  Slot slot = Slot::kSelect;
  int index = 0;  // item, predicate or gap index where relevant

  bool operator==(const DecisionPoint&) const = default;
};

std::string to_string(const DecisionPoint& point);

// Output class of a decision.
//   COL       -> vector<ColumnId> (SELECT: ordered; WHERE: sorted multiset;
//                GROUP BY / ORDER BY: sorted set)
//   AGG       -> Agg (select/order items) or AggColumn (HAVING target)
//   KW        -> ClauseSet
//   OP        -> CmpOp
//   AND/OR    -> Connective
//   VALUE     -> PredicateValue
//   HAVING    -> bool
//   DESC/ASC  -> OrderTail
//   join      -> JoinPath
using Choice = std::variant<std::vector<ColumnId>, Agg, AggColumn, ClauseSet, CmpOp, Connective,
                            PredicateValue, bool, OrderTail, JoinPath>;

std::string describe_choice(const SchemaCatalog& catalog, const Choice& choice);

struct TraceEntry {
  DecisionPoint point;
  Choice choice;
  double score = 1.0;
};
using DecisionTrace = std::vector<TraceEntry>;

PartialQuery new_root();

// Open placeholders in schedule order. The join path, when pending, comes
// first: it is filled by join-path construction rather than guidance.
std::vector<DecisionPoint> holes(const PartialQuery& pq);
std::optional<DecisionPoint> next_decision(const PartialQuery& pq);
bool is_complete(const PartialQuery& pq);

// Resolves exactly the placeholder at `point`. Throws DecisionError when
// `point` is not the next open decision or the choice has the wrong shape.
// Clears the join path when the referenced table set changes.
PartialQuery apply_decision(const PartialQuery& pq, const SchemaCatalog& catalog,
                            const DecisionPoint& point, const Choice& choice);

PartialQuery replay(const DecisionTrace& trace, const SchemaCatalog& catalog);

// Tables referenced by any decided column (star excluded), sorted.
std::vector<TableId> referenced_tables(const PartialQuery& pq, const SchemaCatalog& catalog);

// Constants already placed in the query: predicate values, BETWEEN bounds,
// the HAVING value and a positive LIMIT.
std::vector<Value> used_constants(const PartialQuery& pq);
// Literals of `literals` not yet matched by a constant (multiset difference).
std::vector<Literal> unconsumed_literals(const PartialQuery& pq,
                                         const std::vector<Literal>& literals);

// True when no later decision can add a column reference.
bool table_set_final(const PartialQuery& pq);
bool where_complete(const PartialQuery& pq);

enum class RenderMode { kExecutable, kDisplay };

// Renders fragments of a query with a fixed alias scheme: no alias for a
// single table, t1..tn in breadth-first join order otherwise.
class SqlRenderer {
 public:
  SqlRenderer(const SchemaCatalog& catalog, const PartialQuery& pq, RenderMode mode);

  std::string column(ColumnId id) const;
  std::string item(const AggColumn& item) const;
  std::string predicate(const Predicate& p) const;
  std::string having_predicate() const;
  std::string from() const;
  // Executable mode: the widest WHERE body that every completion implies,
  // or nullopt when nothing safe can be kept.
  std::optional<std::string> where_body() const;
  bool where_has_or() const;
  std::optional<std::string> group_by_body() const;
  std::optional<std::string> having_body() const;

  std::string render() const;

 private:
  const SchemaCatalog& catalog_;
  const PartialQuery& pq_;
  RenderMode mode_;
  std::vector<std::string> alias_;  // per table id; empty when unaliased
  bool qualify_ = false;
};

// Throws DecisionError in executable mode when the select list or the join
// path is unresolved.
std::string render_sql(const PartialQuery& pq, const SchemaCatalog& catalog,
                       RenderMode mode = RenderMode::kExecutable);

// Identity of a partial state, placeholders included.
std::string structural_key(const PartialQuery& pq);
// Order-insensitive identity of a complete query; aliases and DISTINCT do
// not participate.
std::string canonical_key(const PartialQuery& pq, const SchemaCatalog& catalog);
bool canonical_eq(const PartialQuery& a, const PartialQuery& b, const SchemaCatalog& catalog);

// Parses SQL within the supported SPJA subset into a complete query.
// Throws ScopeError for set operations, subqueries, nested mixed logic or
// joins outside FK-PK edges.
PartialQuery parse_gold(std::string_view sql, const SchemaCatalog& catalog);

}  // namespace dualsql
