// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/verifier.hpp"

#include <algorithm>
#include <deque>

#include "dualsql/error.hpp"

namespace dualsql {

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kClauses: return "clauses";
    case Stage::kSemantics: return "semantics";
    case Stage::kColumnTypes: return "column_types";
    case Stage::kByColumn: return "by_column";
    case Stage::kByRow: return "by_row";
    case Stage::kLiterals: return "literals";
    case Stage::kOrder: return "order";
    case Stage::kResult: return "result";
  }
  return "?";
}

std::string_view to_string(SemanticRule rule) {
  switch (rule) {
    case SemanticRule::kInconsistentPredicates: return "inconsistent_predicates";
    case SemanticRule::kConstantOutputColumn: return "constant_output_column";
    case SemanticRule::kUngroupedAggregation: return "ungrouped_aggregation";
    case SemanticRule::kSingletonGroups: return "groupby_singleton_groups";
    case SemanticRule::kUnnecessaryGroupBy: return "unnecessary_groupby";
    case SemanticRule::kAggregateTypeUsage: return "aggregate_type_usage";
    case SemanticRule::kFaultyTypeComparison: return "faulty_type_comparison";
  }
  return "?";
}

bool verify_clauses(bool sorted, int limit, const PartialQuery& pq) {
  if (!pq.clauses) return true;
  bool order = pq.clauses->order_by;
  if (sorted != order) return false;
  if (limit > 0) {
    if (!order) return false;
    if (pq.order_tail && pq.order_tail->limit == 0) return false;
  } else if (pq.order_tail && pq.order_tail->limit > 0) {
    return false;
  }
  return true;
}

namespace {

bool is_aggregated(const AggColumn& item) { return item.agg && *item.agg != Agg::kNone; }
bool is_bare(const AggColumn& item) { return item.agg && *item.agg == Agg::kNone; }

bool and_connected(const PartialQuery& pq, std::size_t i, std::size_t j) {
  for (std::size_t g = i; g < j; ++g) {
    if (pq.connectives[g] != Connective::kAnd) return false;
  }
  return true;
}

bool bad_agg_type(const SchemaCatalog& catalog, const AggColumn& item) {
  if (!is_aggregated(item) || item.column == kStar) return false;
  if (catalog.type_of(item.column) != SemanticType::kText) return false;
  return *item.agg != Agg::kCount;
}

// Grouping by the primary key of `t` yields singleton groups when every join
// edge, walked away from `t`, goes from the FK side to the PK side.
bool singleton_groups(const PartialQuery& pq, const SchemaCatalog& catalog) {
  const auto& keys = *pq.group_by;
  const JoinPath& jp = *pq.join_path;
  for (TableId t : jp.tables) {
    auto pk = catalog.primary_key(t);
    if (pk.empty()) continue;
    bool covered = std::all_of(pk.begin(), pk.end(), [&](ColumnId c) {
      return std::find(keys.begin(), keys.end(), c) != keys.end();
    });
    if (!covered) continue;
    bool fanout = false;
    std::set<TableId> seen{t};
    std::deque<TableId> queue{t};
    while (!queue.empty() && !fanout) {
      TableId cur = queue.front();
      queue.pop_front();
      for (std::size_t e : jp.edges) {
        const FkPkEdge& edge = catalog.edges()[e];
        TableId fk_side = catalog.table_of(edge.from);
        TableId pk_side = catalog.table_of(edge.to);
        TableId other;
        if (fk_side == cur && !seen.count(pk_side)) {
          other = pk_side;
        } else if (pk_side == cur && !seen.count(fk_side)) {
          fanout = true;
          break;
        } else {
          continue;
        }
        seen.insert(other);
        queue.push_back(other);
      }
    }
    if (!fanout) return true;
  }
  return false;
}

}  // namespace

std::optional<SemanticRule> verify_semantics(const PartialQuery& pq, const SchemaCatalog& catalog) {
  // Aggregate type usage.
  auto items_bad = [&](const std::optional<std::vector<AggColumn>>& items) {
    return items && std::any_of(items->begin(), items->end(),
                                [&](const AggColumn& it) { return bad_agg_type(catalog, it); });
  };
  if (items_bad(pq.select) || items_bad(pq.order_by) ||
      (pq.having.target && bad_agg_type(catalog, *pq.having.target))) {
    return SemanticRule::kAggregateTypeUsage;
  }

  if (pq.where) {
    const auto& preds = *pq.where;
    // Faulty type comparison.
    for (const auto& p : preds) {
      SemanticType type = catalog.type_of(p.column);
      if (p.op) {
        bool ordering = *p.op == CmpOp::kGt || *p.op == CmpOp::kLt || *p.op == CmpOp::kGe ||
                        *p.op == CmpOp::kLe || *p.op == CmpOp::kBetween;
        if (type == SemanticType::kText && ordering) return SemanticRule::kFaultyTypeComparison;
        if (type == SemanticType::kNumber && *p.op == CmpOp::kLike) {
          return SemanticRule::kFaultyTypeComparison;
        }
      }
      if (p.value && (p.value->lo.type() != type || (p.value->hi && p.value->hi->type() != type))) {
        return SemanticRule::kFaultyTypeComparison;
      }
    }
    // Inconsistent predicates.
    for (std::size_t i = 0; i < preds.size(); ++i) {
      for (std::size_t j = i + 1; j < preds.size(); ++j) {
        const auto& a = preds[i];
        const auto& b = preds[j];
        if (a.column != b.column || a.op != CmpOp::kEq || b.op != CmpOp::kEq) continue;
        if (!a.value || !b.value || a.value->lo == b.value->lo) continue;
        if (and_connected(pq, i, j)) return SemanticRule::kInconsistentPredicates;
      }
    }
    // Constant output column: only when the whole WHERE is one AND group.
    if (pq.select && and_connected(pq, 0, pq.connectives.size())) {
      for (const auto& it : *pq.select) {
        if (!is_bare(it)) continue;
        for (const auto& p : preds) {
          if (p.column == it.column && p.op == CmpOp::kEq) return SemanticRule::kConstantOutputColumn;
        }
      }
    }
  }
  if (pq.having.value && !pq.having.value->is_number()) return SemanticRule::kFaultyTypeComparison;

  // Ungrouped aggregation.
  if (pq.clauses) {
    std::vector<const AggColumn*> items;
    if (pq.select) for (const auto& it : *pq.select) items.push_back(&it);
    if (pq.order_by) for (const auto& it : *pq.order_by) items.push_back(&it);
    if (!pq.clauses->group_by) {
      bool agg = std::any_of(items.begin(), items.end(), [](auto* it) { return is_aggregated(*it); });
      bool bare = std::any_of(items.begin(), items.end(), [](auto* it) { return is_bare(*it); });
      if (agg && bare) return SemanticRule::kUngroupedAggregation;
    } else if (pq.group_by) {
      for (const AggColumn* it : items) {
        if (is_bare(*it) && std::find(pq.group_by->begin(), pq.group_by->end(), it->column) ==
                                pq.group_by->end()) {
          return SemanticRule::kUngroupedAggregation;
        }
      }
    }
  }

  if (pq.clauses && pq.clauses->group_by && pq.group_by) {
    // Singleton groups, once the join path can no longer change.
    if (pq.join_path && table_set_final(pq) && singleton_groups(pq, catalog)) {
      return SemanticRule::kSingletonGroups;
    }
    // Unnecessary GROUP BY, once every aggregate slot is decided.
    bool any_agg = false, all_known = true;
    auto scan = [&](const std::optional<std::vector<AggColumn>>& items, bool declared) {
      if (!declared) return;
      if (!items) {
        all_known = false;
        return;
      }
      for (const auto& it : *items) {
        if (!it.agg) all_known = false;
        else if (*it.agg != Agg::kNone) any_agg = true;
      }
    };
    scan(pq.select, true);
    scan(pq.order_by, pq.clauses->order_by);
    if (!pq.has_having) all_known = false;
    else if (*pq.has_having) any_agg = true;
    if (!any_agg && all_known) return SemanticRule::kUnnecessaryGroupBy;
  }
  return std::nullopt;
}

std::vector<std::optional<SemanticType>> projected_types(const PartialQuery& pq,
                                                         const SchemaCatalog& catalog) {
  std::vector<std::optional<SemanticType>> out;
  if (!pq.select) return out;
  for (const auto& it : *pq.select) {
    if (it.column == kStar) {
      out.push_back(SemanticType::kNumber);
    } else if (!it.agg) {
      if (catalog.type_of(it.column) == SemanticType::kNumber) {
        out.push_back(SemanticType::kNumber);
      } else {
        out.push_back(std::nullopt);
      }
    } else if (*it.agg == Agg::kNone || *it.agg == Agg::kMax || *it.agg == Agg::kMin) {
      out.push_back(catalog.type_of(it.column));
    } else {
      out.push_back(SemanticType::kNumber);
    }
  }
  return out;
}

bool verify_column_types(const std::vector<SemanticType>& types, const PartialQuery& pq,
                         const SchemaCatalog& catalog) {
  if (types.empty() || !pq.select) return true;
  if (types.size() != pq.select->size()) return false;
  auto projected = projected_types(pq, catalog);
  for (std::size_t i = 0; i < types.size(); ++i) {
    // An open aggregate on a text column may still yield text or number.
    if (projected[i] && *projected[i] != types[i]) return false;
  }
  return true;
}

bool verify_literals(const PartialQuery& pq, const std::vector<Literal>& literals) {
  return unconsumed_literals(pq, literals).empty();
}

bool can_check_rows(const PartialQuery& pq) {
  if (!pq.select || !pq.join_path) return false;
  bool aggregated = false;
  for (const auto& it : *pq.select) {
    if (!it.agg) return false;
    if (*it.agg != Agg::kNone) aggregated = true;
  }
  if (!aggregated) return true;
  if (!where_complete(pq) || !table_set_final(pq)) return false;
  if (pq.clauses->group_by) {
    if (!pq.group_by || !pq.has_having) return false;
    if (*pq.has_having && !pq.having.resolved()) return false;
  }
  return true;
}

bool cell_type_compatible(const ExampleCell& cell, SemanticType type) {
  switch (cell.kind) {
    case ExampleCell::Kind::kEmpty: return true;
    case ExampleCell::Kind::kExact: return cell.value.type() == type;
    case ExampleCell::Kind::kRange: return type == SemanticType::kNumber;
  }
  return false;
}

namespace {

std::string match_condition(const std::string& expr, const ExampleCell& cell, bool parenthesize) {
  if (cell.kind == ExampleCell::Kind::kExact) return expr + " = " + cell.value.sql_literal();
  std::string s = expr + " >= " + format_number(cell.lo) + " AND " + expr + " <= " +
                  format_number(cell.hi);
  return parenthesize ? "(" + s + ")" : s;
}

}  // namespace

std::optional<std::string> build_cv_query(const PartialQuery& pq, const SchemaCatalog& catalog,
                                          std::size_t col, const ExampleCell& cell) {
  if (cell.kind == ExampleCell::Kind::kEmpty || !pq.select) return std::nullopt;
  const AggColumn& it = pq.select->at(col);
  if (it.column == kStar || !it.agg) return std::nullopt;
  if (*it.agg != Agg::kNone && *it.agg != Agg::kMin && *it.agg != Agg::kMax) return std::nullopt;
  const ColumnInfo& info = catalog.column(it.column);
  return "SELECT 1 FROM " + catalog.table(info.table).name + " WHERE " +
         match_condition(info.name, cell, false) + " LIMIT 1";
}

std::string build_rv_query(const PartialQuery& pq, const SchemaCatalog& catalog,
                           const ExampleTuple& tuple) {
  SqlRenderer r(catalog, pq, RenderMode::kExecutable);
  const auto& items = *pq.select;
  std::vector<std::string> where_conds, having_conds;
  bool all_agg = true;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!is_aggregated(items[i])) all_agg = false;
  }
  auto where = r.where_body();
  auto group = r.group_by_body();
  if (where) where_conds.push_back(r.where_has_or() ? "(" + *where + ")" : *where);

  if (all_agg && !group) {
    std::string inner = "SELECT ";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) inner += ", ";
      inner += r.item(items[i]) + " AS c" + std::to_string(i);
    }
    inner += " " + r.from();
    if (where) inner += " WHERE " + *where;
    std::vector<std::string> conds;
    for (std::size_t i = 0; i < items.size() && i < tuple.size(); ++i) {
      if (tuple[i].kind == ExampleCell::Kind::kEmpty) continue;
      conds.push_back(match_condition("c" + std::to_string(i), tuple[i], true));
    }
    std::string s = "SELECT 1 FROM (" + inner + ")";
    for (std::size_t i = 0; i < conds.size(); ++i) s += (i ? " AND " : " WHERE ") + conds[i];
    return s + " LIMIT 1";
  }

  for (std::size_t i = 0; i < items.size() && i < tuple.size(); ++i) {
    if (tuple[i].kind == ExampleCell::Kind::kEmpty) continue;
    if (is_aggregated(items[i])) {
      having_conds.push_back(match_condition(r.item(items[i]), tuple[i], true));
    } else {
      where_conds.push_back(match_condition(r.column(items[i].column), tuple[i], true));
    }
  }
  // A lone range condition needs no parentheses around it.
  auto join_all = [](const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " AND " : "") + parts[i];
    return s;
  };
  std::string s = "SELECT 1 " + r.from();
  if (!where_conds.empty()) s += " WHERE " + join_all(where_conds);
  if (group) {
    s += " GROUP BY " + *group;
    if (auto h = r.having_body()) having_conds.insert(having_conds.begin(), *h);
    if (!having_conds.empty()) s += " HAVING " + join_all(having_conds);
  }
  return s + " LIMIT 1";
}

Execution execute_query(const PartialQuery& pq, const SchemaCatalog& catalog, Database& db) {
  Execution ex;
  ex.result = db.query(render_sql(pq, catalog, RenderMode::kExecutable));
  ex.meta.has_order_by = pq.clauses && pq.clauses->order_by;
  for (const auto& t : projected_types(pq, catalog)) {
    ex.meta.projected_types.push_back(t.value_or(SemanticType::kText));
  }
  return ex;
}

Verifier::Verifier(const SchemaCatalog& catalog, Database& db, std::optional<TableSketchQuery> tsq,
                   std::vector<Literal> literals)
    : catalog_(catalog), db_(db), tsq_(std::move(tsq)), literals_(std::move(literals)) {}

bool Verifier::probe(const std::string& sql, VerificationOutcome& out) {
  auto it = cache_.find(sql);
  if (it != cache_.end()) return it->second;
  ++probes_;
  ++out.probes_executed;
  bool found = db_.exists(sql);
  cache_.emplace(sql, found);
  return found;
}

std::optional<std::pair<double, double>> Verifier::column_range(ColumnId c,
                                                                VerificationOutcome& out) {
  auto it = ranges_.find(c);
  if (it != ranges_.end()) return it->second;
  ++probes_;
  ++out.probes_executed;
  const ColumnInfo& info = catalog_.column(c);
  auto rs = db_.query("SELECT MIN(" + info.name + "), MAX(" + info.name + ") FROM " +
                      catalog_.table(info.table).name);
  std::optional<std::pair<double, double>> range;
  if (!rs.rows.empty() && rs.rows[0][0].is_number() && rs.rows[0][1].is_number()) {
    range = std::make_pair(rs.rows[0][0].number(), rs.rows[0][1].number());
  }
  ranges_.emplace(c, range);
  return range;
}

bool Verifier::verify_by_column(const PartialQuery& pq, VerificationOutcome& out) {
  if (!tsq_ || tsq_->tuples.empty() || !pq.select) return true;
  auto types = projected_types(pq, catalog_);
  for (const auto& tuple : tsq_->tuples) {
    for (std::size_t i = 0; i < tuple.size() && i < pq.select->size(); ++i) {
      const ExampleCell& cell = tuple[i];
      if (cell.kind == ExampleCell::Kind::kEmpty) continue;
      const AggColumn& it = (*pq.select)[i];
      if (types[i] && !cell_type_compatible(cell, *types[i])) {
        out.column = static_cast<int>(i);
        return false;
      }
      if (it.agg == Agg::kAvg) {
        auto range = column_range(it.column, out);
        double lo = cell.kind == ExampleCell::Kind::kRange ? cell.lo : cell.value.number();
        double hi = cell.kind == ExampleCell::Kind::kRange ? cell.hi : cell.value.number();
        if (!range || hi < range->first || lo > range->second) {
          out.column = static_cast<int>(i);
          return false;
        }
        continue;
      }
      auto sql = build_cv_query(pq, catalog_, i, cell);
      if (sql && !probe(*sql, out)) {
        out.column = static_cast<int>(i);
        return false;
      }
    }
  }
  return true;
}

bool Verifier::verify_by_row(const PartialQuery& pq, VerificationOutcome& out) {
  if (!tsq_ || tsq_->tuples.empty()) return true;
  auto types = projected_types(pq, catalog_);
  for (const auto& tuple : tsq_->tuples) {
    for (std::size_t i = 0; i < tuple.size() && i < types.size(); ++i) {
      if (types[i] && !cell_type_compatible(tuple[i], *types[i])) return false;
    }
    if (!probe(build_rv_query(pq, catalog_, tuple), out)) return false;
  }
  return true;
}

const Execution& Verifier::run_full(const PartialQuery& pq, VerificationOutcome& out) {
  std::string sql = render_sql(pq, catalog_, RenderMode::kExecutable);
  if (sql != last_sql_) {
    ++probes_;
    ++out.probes_executed;
    last_exec_ = execute_query(pq, catalog_, db_);
    last_sql_ = sql;
  }
  return last_exec_;
}

bool Verifier::verify_by_order(const PartialQuery& pq, VerificationOutcome& out) {
  if (!tsq_ || !tsq_->sorted || tsq_->tuples.size() < 2) return true;
  return match_tuples(tsq_->tuples, run_full(pq, out).result.rows, true);
}

VerificationOutcome Verifier::verify(const PartialQuery& pq) {
  VerificationOutcome out;
  auto fail = [&](Stage s) {
    out.passed = false;
    out.failed_stage = s;
    return out;
  };
  if (tsq_ && !verify_clauses(tsq_->sorted, tsq_->limit, pq)) return fail(Stage::kClauses);
  if (auto rule = verify_semantics(pq, catalog_)) {
    out.rule = rule;
    return fail(Stage::kSemantics);
  }
  if (tsq_) {
    std::vector<SemanticType> types = tsq_->types;
    bool ok = verify_column_types(types, pq, catalog_);
    if (ok && pq.select && !tsq_->tuples.empty() && tsq_->arity() != pq.select->size()) ok = false;
    if (!ok) return fail(Stage::kColumnTypes);
    if (!verify_by_column(pq, out)) return fail(Stage::kByColumn);
    if (can_check_rows(pq) && !verify_by_row(pq, out)) return fail(Stage::kByRow);
  }
  if (!is_complete(pq)) return out;
  if (!verify_literals(pq, literals_)) return fail(Stage::kLiterals);
  if (tsq_) {
    if (!verify_by_order(pq, out)) return fail(Stage::kOrder);
    if (!tsq_->tuples.empty() || tsq_->limit > 0) {
      const Execution& ex = run_full(pq, out);
      if (!satisfies(*tsq_, ex.result.rows, ex.meta)) return fail(Stage::kResult);
    }
  }
  return out;
}

VerificationOutcome verify(const std::optional<TableSketchQuery>& tsq,
                           const std::vector<Literal>& literals, const PartialQuery& pq,
                           const SchemaCatalog& catalog, Database& db) {
  Verifier v(catalog, db, tsq, literals);
  return v.verify(pq);
}

}  // namespace dualsql
