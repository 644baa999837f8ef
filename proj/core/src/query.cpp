// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/query.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "dualsql/error.hpp"

namespace dualsql {

std::string_view to_string(Agg agg) {
  switch (agg) {
    case Agg::kNone: return "NONE";
    case Agg::kMax: return "MAX";
    case Agg::kMin: return "MIN";
    case Agg::kSum: return "SUM";
    case Agg::kCount: return "COUNT";
    case Agg::kAvg: return "AVG";
  }
  return "?";
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return "=";
    case CmpOp::kNe: return "!=";
    case CmpOp::kGt: return ">";
    case CmpOp::kLt: return "<";
    case CmpOp::kGe: return ">=";
    case CmpOp::kLe: return "<=";
    case CmpOp::kBetween: return "BETWEEN";
    case CmpOp::kLike: return "LIKE";
  }
  return "?";
}

std::string_view to_string(Connective c) { return c == Connective::kAnd ? "AND" : "OR"; }
std::string_view to_string(Direction d) { return d == Direction::kAsc ? "ASC" : "DESC"; }

std::string_view to_string(Module m) {
  switch (m) {
    case Module::kKw: return "KW";
    case Module::kCol: return "COL";
    case Module::kOp: return "OP";
    case Module::kAgg: return "AGG";
    case Module::kAndOr: return "AND/OR";
    case Module::kDescAsc: return "DESC/ASC";
    case Module::kHaving: return "HAVING";
    case Module::kValue: return "VALUE";
    case Module::kJoin: return "JOIN";
  }
  return "?";
}

std::string_view to_string(Slot s) {
  switch (s) {
    case Slot::kSelect: return "select";
    case Slot::kClauses: return "clauses";
    case Slot::kWhere: return "where";
    case Slot::kGroupBy: return "group_by";
    case Slot::kHaving: return "having";
    case Slot::kOrderBy: return "order_by";
    case Slot::kFrom: return "from";
  }
  return "?";
}

std::string to_string(const DecisionPoint& point) {
  return std::string(to_string(point.module)) + "(" + std::string(to_string(point.slot)) + ":" +
         std::to_string(point.index) + ")";
}

namespace {

std::string value_text(const PredicateValue& v) {
  std::string s = v.lo.sql_literal();
  if (v.hi) s += "," + v.hi->sql_literal();
  return s;
}

std::string agg_column_text(const SchemaCatalog& catalog, const AggColumn& item) {
  std::string col = catalog.qualified_name(item.column);
  if (!item.agg) return "?(" + col + ")";
  if (*item.agg == Agg::kNone) return col;
  return std::string(to_string(*item.agg)) + "(" + col + ")";
}

}  // namespace

std::string describe_choice(const SchemaCatalog& catalog, const Choice& choice) {
  struct Visitor {
    const SchemaCatalog& catalog;
    std::string operator()(const std::vector<ColumnId>& cols) const {
      std::string s = "[";
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) s += ",";
        s += catalog.qualified_name(cols[i]);
      }
      return s + "]";
    }
    std::string operator()(Agg a) const { return std::string(to_string(a)); }
    std::string operator()(const AggColumn& a) const { return agg_column_text(catalog, a); }
    std::string operator()(const ClauseSet& c) const {
      std::string s = "{";
      if (c.where) s += "WHERE,";
      if (c.group_by) s += "GROUP BY,";
      if (c.order_by) s += "ORDER BY,";
      if (s.back() == ',') s.pop_back();
      return s + "}";
    }
    std::string operator()(CmpOp op) const { return std::string(to_string(op)); }
    std::string operator()(Connective c) const { return std::string(to_string(c)); }
    std::string operator()(const PredicateValue& v) const { return value_text(v); }
    std::string operator()(bool b) const { return b ? "HAVING" : "no HAVING"; }
    std::string operator()(const OrderTail& t) const {
      return std::string(to_string(t.direction)) + " LIMIT " + std::to_string(t.limit);
    }
    std::string operator()(const JoinPath& jp) const {
      std::string s = "join[";
      for (std::size_t i = 0; i < jp.edges.size(); ++i) {
        if (i) s += ",";
        const FkPkEdge& e = catalog.edges()[jp.edges[i]];
        s += catalog.qualified_name(e.from) + "=" + catalog.qualified_name(e.to);
      }
      if (jp.edges.empty() && !jp.tables.empty()) s += catalog.table(jp.tables[0]).name;
      return s + "]";
    }
  };
  return std::visit(Visitor{catalog}, choice);
}

PartialQuery new_root() { return PartialQuery{}; }

std::vector<DecisionPoint> holes(const PartialQuery& pq) {
  if (!pq.select) return {{Module::kCol, Slot::kSelect, 0}};
  std::vector<DecisionPoint> out;
  if (!pq.join_path) out.push_back({Module::kJoin, Slot::kFrom, 0});
  for (std::size_t i = 0; i < pq.select->size(); ++i) {
    if (!(*pq.select)[i].agg) out.push_back({Module::kAgg, Slot::kSelect, static_cast<int>(i)});
  }
  if (!pq.clauses) {
    out.push_back({Module::kKw, Slot::kClauses, 0});
    return out;
  }
  if (pq.clauses->where) {
    if (!pq.where) {
      out.push_back({Module::kCol, Slot::kWhere, 0});
    } else {
      const auto& preds = *pq.where;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        if (!preds[i].op) out.push_back({Module::kOp, Slot::kWhere, static_cast<int>(i)});
      }
      for (std::size_t i = 0; i < pq.connectives.size(); ++i) {
        if (!pq.connectives[i]) out.push_back({Module::kAndOr, Slot::kWhere, static_cast<int>(i)});
      }
      for (std::size_t i = 0; i < preds.size(); ++i) {
        if (!preds[i].value) out.push_back({Module::kValue, Slot::kWhere, static_cast<int>(i)});
      }
    }
  }
  if (pq.clauses->group_by) {
    if (!pq.group_by) out.push_back({Module::kCol, Slot::kGroupBy, 0});
    if (!pq.has_having) {
      out.push_back({Module::kHaving, Slot::kGroupBy, 0});
    } else if (*pq.has_having) {
      if (!pq.having.target) out.push_back({Module::kAgg, Slot::kHaving, 0});
      if (!pq.having.op) out.push_back({Module::kOp, Slot::kHaving, 0});
      if (!pq.having.value) out.push_back({Module::kValue, Slot::kHaving, 0});
    }
  }
  if (pq.clauses->order_by) {
    if (!pq.order_by) {
      out.push_back({Module::kCol, Slot::kOrderBy, 0});
    } else {
      for (std::size_t i = 0; i < pq.order_by->size(); ++i) {
        if (!(*pq.order_by)[i].agg) {
          out.push_back({Module::kAgg, Slot::kOrderBy, static_cast<int>(i)});
        }
      }
    }
    if (!pq.order_tail) out.push_back({Module::kDescAsc, Slot::kOrderBy, 0});
  }
  return out;
}

std::optional<DecisionPoint> next_decision(const PartialQuery& pq) {
  auto h = holes(pq);
  if (h.empty()) return std::nullopt;
  return h.front();
}

bool is_complete(const PartialQuery& pq) { return holes(pq).empty(); }

std::vector<TableId> referenced_tables(const PartialQuery& pq, const SchemaCatalog& catalog) {
  std::set<TableId> tables;
  auto add = [&](ColumnId c) {
    if (c != kStar) tables.insert(catalog.table_of(c));
  };
  if (pq.select) for (const auto& item : *pq.select) add(item.column);
  if (pq.where) for (const auto& p : *pq.where) add(p.column);
  if (pq.group_by) for (ColumnId c : *pq.group_by) add(c);
  if (pq.having.target) add(pq.having.target->column);
  if (pq.order_by) for (const auto& item : *pq.order_by) add(item.column);
  return {tables.begin(), tables.end()};
}

namespace {

[[noreturn]] void bad_choice(const DecisionPoint& point, const std::string& why) {
  throw DecisionError("illegal choice for " + to_string(point) + ": " + why);
}

template <typename T>
const T& expect(const DecisionPoint& point, const Choice& choice) {
  const T* v = std::get_if<T>(&choice);
  if (!v) bad_choice(point, "wrong output class");
  return *v;
}

void check_columns(const DecisionPoint& point, const SchemaCatalog& catalog,
                   const std::vector<ColumnId>& cols, bool allow_star) {
  if (cols.empty()) bad_choice(point, "empty column set");
  for (ColumnId c : cols) {
    if (c == kStar) {
      if (!allow_star) bad_choice(point, "star not allowed");
    } else if (c < 0 || c >= static_cast<ColumnId>(catalog.column_count())) {
      bad_choice(point, "unknown column");
    }
  }
}

void check_agg(const DecisionPoint& point, ColumnId column, Agg agg) {
  if (column == kStar && agg != Agg::kCount) bad_choice(point, "star requires COUNT");
}

}  // namespace

PartialQuery apply_decision(const PartialQuery& pq, const SchemaCatalog& catalog,
                            const DecisionPoint& point, const Choice& choice) {
  auto h = holes(pq);
  if (h.empty() || !(h.front() == point)) {
    throw DecisionError(to_string(point) + " is not the next open decision");
  }
  PartialQuery out = pq;
  switch (point.module) {
    case Module::kJoin:
      out.join_path = expect<JoinPath>(point, choice);
      return out;
    case Module::kCol: {
      const auto& cols = expect<std::vector<ColumnId>>(point, choice);
      auto before = referenced_tables(pq, catalog);
      if (point.slot == Slot::kSelect) {
        check_columns(point, catalog, cols, true);
        if (std::set<ColumnId>(cols.begin(), cols.end()).size() != cols.size()) {
          bad_choice(point, "duplicate select column");
        }
        std::vector<AggColumn> items;
        for (ColumnId c : cols) items.push_back({c, std::nullopt});
        out.select = std::move(items);
      } else if (point.slot == Slot::kWhere) {
        check_columns(point, catalog, cols, false);
        if (!std::is_sorted(cols.begin(), cols.end())) bad_choice(point, "unsorted columns");
        std::vector<Predicate> preds;
        for (ColumnId c : cols) preds.push_back({c, std::nullopt, std::nullopt});
        out.where = std::move(preds);
        out.connectives.assign(cols.size() - 1, std::nullopt);
      } else if (point.slot == Slot::kGroupBy) {
        check_columns(point, catalog, cols, false);
        if (std::adjacent_find(cols.begin(), cols.end(), std::greater_equal<>()) != cols.end()) {
          bad_choice(point, "columns must be strictly increasing");
        }
        out.group_by = cols;
      } else if (point.slot == Slot::kOrderBy) {
        check_columns(point, catalog, cols, true);
        if (std::adjacent_find(cols.begin(), cols.end(), std::greater_equal<>()) != cols.end()) {
          bad_choice(point, "columns must be strictly increasing");
        }
        std::vector<AggColumn> items;
        for (ColumnId c : cols) items.push_back({c, std::nullopt});
        out.order_by = std::move(items);
      } else {
        bad_choice(point, "no column decision here");
      }
      if (referenced_tables(out, catalog) != before) out.join_path.reset();
      return out;
    }
    case Module::kAgg: {
      if (point.slot == Slot::kHaving) {
        const auto& target = expect<AggColumn>(point, choice);
        if (!target.agg || *target.agg == Agg::kNone) bad_choice(point, "HAVING needs an aggregate");
        check_agg(point, target.column, *target.agg);
        auto before = referenced_tables(pq, catalog);
        out.having.target = target;
        if (referenced_tables(out, catalog) != before) out.join_path.reset();
        return out;
      }
      Agg agg = expect<Agg>(point, choice);
      auto& items = point.slot == Slot::kSelect ? *out.select : *out.order_by;
      check_agg(point, items.at(point.index).column, agg);
      items.at(point.index).agg = agg;
      return out;
    }
    case Module::kKw:
      out.clauses = expect<ClauseSet>(point, choice);
      return out;
    case Module::kOp: {
      CmpOp op = expect<CmpOp>(point, choice);
      if (point.slot == Slot::kHaving) {
        if (op == CmpOp::kLike || op == CmpOp::kBetween) bad_choice(point, "not a HAVING operator");
        out.having.op = op;
      } else {
        out.where->at(point.index).op = op;
      }
      return out;
    }
    case Module::kAndOr: {
      Connective c = expect<Connective>(point, choice);
      out.connectives.at(point.index) = c;
      if (c == Connective::kOr) {
        for (std::size_t i = point.index + 1; i < out.connectives.size(); ++i) {
          out.connectives[i] = Connective::kOr;
        }
      }
      return out;
    }
    case Module::kValue: {
      const auto& v = expect<PredicateValue>(point, choice);
      if (v.lo.is_null()) bad_choice(point, "NULL constant");
      if (point.slot == Slot::kHaving) {
        if (v.hi) bad_choice(point, "HAVING takes a single value");
        out.having.value = v.lo;
      } else {
        Predicate& p = out.where->at(point.index);
        if ((*p.op == CmpOp::kBetween) != v.hi.has_value()) bad_choice(point, "BETWEEN arity");
        p.value = v;
      }
      return out;
    }
    case Module::kHaving:
      out.has_having = expect<bool>(point, choice);
      return out;
    case Module::kDescAsc: {
      const auto& tail = expect<OrderTail>(point, choice);
      if (tail.limit < 0) bad_choice(point, "negative limit");
      out.order_tail = tail;
      return out;
    }
  }
  bad_choice(point, "unknown module");
}

PartialQuery replay(const DecisionTrace& trace, const SchemaCatalog& catalog) {
  PartialQuery pq = new_root();
  for (const TraceEntry& e : trace) pq = apply_decision(pq, catalog, e.point, e.choice);
  return pq;
}

std::vector<Value> used_constants(const PartialQuery& pq) {
  std::vector<Value> out;
  if (pq.where) {
    for (const auto& p : *pq.where) {
      if (!p.value) continue;
      out.push_back(p.value->lo);
      if (p.value->hi) out.push_back(*p.value->hi);
    }
  }
  if (pq.having.value) out.push_back(*pq.having.value);
  if (pq.order_tail && pq.order_tail->limit > 0) {
    out.push_back(Value(static_cast<double>(pq.order_tail->limit)));
  }
  return out;
}

std::vector<Literal> unconsumed_literals(const PartialQuery& pq,
                                         const std::vector<Literal>& literals) {
  std::vector<Literal> rest = literals;
  for (const Value& v : used_constants(pq)) {
    auto it = std::find(rest.begin(), rest.end(), v);
    if (it != rest.end()) rest.erase(it);
  }
  return rest;
}

bool table_set_final(const PartialQuery& pq) {
  if (!pq.select || !pq.clauses) return false;
  if (pq.clauses->where && !pq.where) return false;
  if (pq.clauses->group_by) {
    if (!pq.group_by || !pq.has_having) return false;
    if (*pq.has_having && !pq.having.target) return false;
  }
  if (pq.clauses->order_by && !pq.order_by) return false;
  return true;
}

bool where_complete(const PartialQuery& pq) {
  if (!pq.clauses) return false;
  if (!pq.clauses->where) return true;
  if (!pq.where) return false;
  for (const auto& p : *pq.where) {
    if (!p.resolved()) return false;
  }
  for (const auto& c : pq.connectives) {
    if (!c) return false;
  }
  return true;
}

SqlRenderer::SqlRenderer(const SchemaCatalog& catalog, const PartialQuery& pq, RenderMode mode)
    : catalog_(catalog), pq_(pq), mode_(mode), alias_(catalog.table_count()) {
  if (pq.join_path && pq.join_path->tables.size() > 1) {
    qualify_ = true;
    const auto& jp = *pq.join_path;
    std::deque<TableId> queue{jp.tables.front()};
    int next = 1;
    alias_[jp.tables.front()] = "t" + std::to_string(next++);
    while (!queue.empty()) {
      TableId t = queue.front();
      queue.pop_front();
      for (std::size_t e : jp.edges) {
        const FkPkEdge& edge = catalog.edges()[e];
        TableId a = catalog.table_of(edge.from);
        TableId b = catalog.table_of(edge.to);
        TableId other = a == t ? b : (b == t ? a : -1);
        if (other < 0 || !alias_[other].empty()) continue;
        alias_[other] = "t" + std::to_string(next++);
        queue.push_back(other);
      }
    }
  }
}

std::string SqlRenderer::column(ColumnId id) const {
  if (id == kStar) return "*";
  const ColumnInfo& c = catalog_.column(id);
  if (!pq_.join_path) return catalog_.table(c.table).name + "." + c.name;
  if (qualify_) return alias_[c.table] + "." + c.name;
  return c.name;
}

std::string SqlRenderer::item(const AggColumn& item) const {
  if (item.column == kStar) {
    if (!item.agg && mode_ == RenderMode::kDisplay) return "?(*)";
    return "COUNT(*)";
  }
  std::string col = column(item.column);
  if (!item.agg || *item.agg == Agg::kNone) return col;
  return std::string(to_string(*item.agg)) + "(" + col + ")";
}

std::string SqlRenderer::predicate(const Predicate& p) const {
  std::string s = column(p.column);
  if (!p.op) return s + " ?";
  s += " ";
  s += to_string(*p.op);
  s += " ";
  if (!p.value) return s + (*p.op == CmpOp::kBetween ? "? AND ?" : "?");
  if (*p.op == CmpOp::kBetween) {
    return s + p.value->lo.sql_literal() + " AND " + p.value->hi->sql_literal();
  }
  if (*p.op == CmpOp::kLike) return s + Value("%" + p.value->lo.str() + "%").sql_literal();
  return s + p.value->lo.sql_literal();
}

std::string SqlRenderer::having_predicate() const {
  const HavingPredicate& h = pq_.having;
  std::string s = h.target ? item(*h.target) : "?";
  s += " ";
  s += h.op ? std::string(to_string(*h.op)) : "?";
  s += " ";
  s += h.value ? h.value->sql_literal() : "?";
  return s;
}

std::string SqlRenderer::from() const {
  if (!pq_.join_path) {
    if (mode_ == RenderMode::kExecutable) throw DecisionError("join path unresolved");
    return "FROM ?";
  }
  const auto& jp = *pq_.join_path;
  if (jp.tables.size() == 1) return "FROM " + catalog_.table(jp.tables[0]).name;
  std::string s = "FROM " + catalog_.table(jp.tables.front()).name + " AS " +
                  alias_[jp.tables.front()];
  std::set<TableId> seen{jp.tables.front()};
  std::deque<TableId> queue{jp.tables.front()};
  while (!queue.empty()) {
    TableId t = queue.front();
    queue.pop_front();
    for (std::size_t e : jp.edges) {
      const FkPkEdge& edge = catalog_.edges()[e];
      TableId a = catalog_.table_of(edge.from);
      TableId b = catalog_.table_of(edge.to);
      ColumnId here, there;
      TableId other;
      if (a == t) {
        other = b, here = edge.from, there = edge.to;
      } else if (b == t) {
        other = a, here = edge.to, there = edge.from;
      } else {
        continue;
      }
      if (seen.count(other)) continue;
      seen.insert(other);
      queue.push_back(other);
      s += " JOIN " + catalog_.table(other).name + " AS " + alias_[other] + " ON " +
           column(here) + " = " + column(there);
    }
  }
  return s;
}

namespace {

std::vector<std::vector<std::size_t>> and_groups(const PartialQuery& pq) {
  std::vector<std::vector<std::size_t>> groups(1);
  for (std::size_t i = 0; i < pq.where->size(); ++i) {
    if (i > 0 && pq.connectives[i - 1] == Connective::kOr) groups.emplace_back();
    groups.back().push_back(i);
  }
  return groups;
}

}  // namespace

std::optional<std::string> SqlRenderer::where_body() const {
  if (!pq_.clauses || !pq_.clauses->where) return std::nullopt;
  if (!pq_.where) {
    if (mode_ == RenderMode::kDisplay) return "?";
    return std::nullopt;
  }
  const auto& preds = *pq_.where;
  bool all_decided = std::all_of(pq_.connectives.begin(), pq_.connectives.end(),
                                 [](const auto& c) { return c.has_value(); });
  if (!all_decided) {
    if (mode_ == RenderMode::kExecutable) return std::nullopt;
    std::string s = predicate(preds[0]);
    for (std::size_t i = 1; i < preds.size(); ++i) {
      s += " " + (pq_.connectives[i - 1] ? std::string(to_string(*pq_.connectives[i - 1])) : "?") +
           " " + predicate(preds[i]);
    }
    return s;
  }
  auto groups = and_groups(pq_);
  std::vector<std::string> rendered;
  for (const auto& g : groups) {
    std::vector<std::string> parts;
    for (std::size_t i : g) {
      if (mode_ == RenderMode::kExecutable && !preds[i].resolved()) continue;
      parts.push_back(predicate(preds[i]));
    }
    if (parts.empty()) return std::nullopt;
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " AND " : "") + parts[i];
    if (groups.size() > 1 && parts.size() > 1) s = "(" + s + ")";
    rendered.push_back(std::move(s));
  }
  std::string s;
  for (std::size_t i = 0; i < rendered.size(); ++i) s += (i ? " OR " : "") + rendered[i];
  return s;
}

bool SqlRenderer::where_has_or() const {
  return pq_.where && std::any_of(pq_.connectives.begin(), pq_.connectives.end(),
                                  [](const auto& c) { return c == Connective::kOr; });
}

std::optional<std::string> SqlRenderer::group_by_body() const {
  if (!pq_.clauses || !pq_.clauses->group_by) return std::nullopt;
  if (!pq_.group_by) {
    if (mode_ == RenderMode::kDisplay) return "?";
    return std::nullopt;
  }
  std::string s;
  for (std::size_t i = 0; i < pq_.group_by->size(); ++i) {
    if (i) s += ", ";
    s += column((*pq_.group_by)[i]);
  }
  return s;
}

std::optional<std::string> SqlRenderer::having_body() const {
  if (!pq_.has_having || !*pq_.has_having) return std::nullopt;
  if (mode_ == RenderMode::kDisplay) return having_predicate();
  if (!pq_.having.resolved() || !where_complete(pq_) || !table_set_final(pq_)) return std::nullopt;
  return having_predicate();
}

std::string SqlRenderer::render() const {
  if (!pq_.select) {
    if (mode_ == RenderMode::kDisplay) return "SELECT ?";
    throw DecisionError("select list unresolved");
  }
  std::string s = "SELECT ";
  for (std::size_t i = 0; i < pq_.select->size(); ++i) {
    if (i) s += ", ";
    s += item((*pq_.select)[i]);
  }
  s += " " + from();
  if (auto w = where_body()) s += " WHERE " + *w;
  if (auto g = group_by_body()) s += " GROUP BY " + *g;
  if (auto h = having_body()) s += " HAVING " + *h;
  if (pq_.clauses && pq_.clauses->order_by) {
    bool items_ready = pq_.order_by && std::all_of(pq_.order_by->begin(), pq_.order_by->end(),
                                                   [](const auto& it) { return it.agg.has_value(); });
    if (mode_ == RenderMode::kDisplay) {
      if (!pq_.order_by) {
        s += " ORDER BY ?";
      } else {
        s += " ORDER BY ";
        for (std::size_t i = 0; i < pq_.order_by->size(); ++i) {
          if (i) s += ", ";
          s += item((*pq_.order_by)[i]);
          if (pq_.order_tail) s += " " + std::string(to_string(pq_.order_tail->direction));
        }
      }
      if (pq_.order_tail && pq_.order_tail->limit > 0) {
        s += " LIMIT " + std::to_string(pq_.order_tail->limit);
      }
    } else if (items_ready && pq_.order_tail) {
      s += " ORDER BY ";
      for (std::size_t i = 0; i < pq_.order_by->size(); ++i) {
        if (i) s += ", ";
        s += item((*pq_.order_by)[i]) + " " + std::string(to_string(pq_.order_tail->direction));
      }
      if (pq_.order_tail->limit > 0 && is_complete(pq_)) {
        s += " LIMIT " + std::to_string(pq_.order_tail->limit);
      }
    }
  }
  return s;
}

std::string render_sql(const PartialQuery& pq, const SchemaCatalog& catalog, RenderMode mode) {
  return SqlRenderer(catalog, pq, mode).render();
}

namespace {

std::string opt_agg(const std::optional<Agg>& a) {
  return a ? std::string(to_string(*a)) : "?";
}

std::string item_key(const AggColumn& item) {
  return opt_agg(item.agg) + "(" + std::to_string(item.column) + ")";
}

}  // namespace

std::string structural_key(const PartialQuery& pq) {
  std::string k = "S";
  if (pq.select) {
    for (const auto& it : *pq.select) k += item_key(it) + ",";
  } else {
    k += "?";
  }
  k += "|K";
  if (pq.clauses) {
    k += std::to_string(pq.clauses->where) + std::to_string(pq.clauses->group_by) +
         std::to_string(pq.clauses->order_by);
  } else {
    k += "?";
  }
  k += "|W";
  if (pq.where) {
    for (std::size_t i = 0; i < pq.where->size(); ++i) {
      const auto& p = (*pq.where)[i];
      k += std::to_string(p.column) + (p.op ? std::string(to_string(*p.op)) : "?") +
           (p.value ? value_text(*p.value) : "?");
      if (i < pq.connectives.size()) {
        k += pq.connectives[i] ? std::string(to_string(*pq.connectives[i])) : "?";
      }
      k += ";";
    }
  } else {
    k += "?";
  }
  k += "|G";
  if (pq.group_by) {
    for (ColumnId c : *pq.group_by) k += std::to_string(c) + ",";
  } else {
    k += "?";
  }
  k += "|H";
  k += pq.has_having ? std::to_string(*pq.has_having) : "?";
  if (pq.having.target) k += item_key(*pq.having.target);
  if (pq.having.op) k += to_string(*pq.having.op);
  if (pq.having.value) k += pq.having.value->sql_literal();
  k += "|O";
  if (pq.order_by) {
    for (const auto& it : *pq.order_by) k += item_key(it) + ",";
  } else {
    k += "?";
  }
  if (pq.order_tail) {
    k += std::string(to_string(pq.order_tail->direction)) + std::to_string(pq.order_tail->limit);
  }
  k += "|J";
  if (pq.join_path) {
    for (TableId t : pq.join_path->tables) k += std::to_string(t) + ",";
    k += "/";
    for (std::size_t e : pq.join_path->edges) k += std::to_string(e) + ",";
  } else {
    k += "?";
  }
  return k;
}

std::string canonical_key(const PartialQuery& pq, const SchemaCatalog& catalog) {
  std::string k = "SELECT ";
  if (pq.select) {
    for (const auto& it : *pq.select) k += agg_column_text(catalog, it) + ",";
  }
  k += " WHERE ";
  if (pq.clauses && pq.clauses->where && pq.where) {
    std::vector<std::string> groups;
    for (const auto& g : and_groups(pq)) {
      std::vector<std::string> preds;
      for (std::size_t i : g) {
        const auto& p = (*pq.where)[i];
        preds.push_back(catalog.qualified_name(p.column) + " " +
                        (p.op ? std::string(to_string(*p.op)) : "?") + " " +
                        (p.value ? value_text(*p.value) : "?"));
      }
      std::sort(preds.begin(), preds.end());
      std::string s;
      for (const auto& p : preds) s += p + "&";
      groups.push_back(std::move(s));
    }
    std::sort(groups.begin(), groups.end());
    for (const auto& g : groups) k += g + "|";
  }
  k += " GROUP ";
  if (pq.group_by) {
    std::vector<std::string> cols;
    for (ColumnId c : *pq.group_by) cols.push_back(catalog.qualified_name(c));
    std::sort(cols.begin(), cols.end());
    for (const auto& c : cols) k += c + ",";
  }
  if (pq.has_having && *pq.has_having) {
    k += " HAVING ";
    if (pq.having.target) k += agg_column_text(catalog, *pq.having.target);
    if (pq.having.op) k += to_string(*pq.having.op);
    if (pq.having.value) k += pq.having.value->sql_literal();
  }
  k += " ORDER ";
  if (pq.order_by) {
    for (const auto& it : *pq.order_by) k += agg_column_text(catalog, it) + ",";
    if (pq.order_tail) {
      k += std::string(to_string(pq.order_tail->direction)) + " " +
           std::to_string(pq.order_tail->limit);
    }
  }
  k += " FROM ";
  if (pq.join_path) {
    std::vector<std::string> parts;
    for (TableId t : pq.join_path->tables) parts.push_back(catalog.table(t).name);
    std::sort(parts.begin(), parts.end());
    for (const auto& p : parts) k += p + ",";
    parts.clear();
    for (std::size_t e : pq.join_path->edges) {
      const FkPkEdge& edge = catalog.edges()[e];
      parts.push_back(catalog.qualified_name(edge.from) + "=" + catalog.qualified_name(edge.to));
    }
    std::sort(parts.begin(), parts.end());
    for (const auto& p : parts) k += p + ";";
  }
  return k;
}

bool canonical_eq(const PartialQuery& a, const PartialQuery& b, const SchemaCatalog& catalog) {
  return canonical_key(a, catalog) == canonical_key(b, catalog);
}

}  // namespace dualsql
