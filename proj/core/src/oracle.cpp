// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "dualsql/error.hpp"
#include "dualsql/verifier.hpp"

namespace dualsql {

OracleBound parse_bound(std::string_view spec) {
  OracleBound b;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    auto end = spec.find(',', pos);
    if (end == std::string_view::npos) end = spec.size();
    auto part = spec.substr(pos, end - pos);
    pos = end + 1;
    if (part.empty()) continue;
    auto eq = part.find('=');
    if (eq == std::string_view::npos) throw Error("bound: expected key=value in '" + std::string(part) + "'");
    auto key = part.substr(0, eq);
    auto text = part.substr(eq + 1);
    int v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || v < 0) {
      throw Error("bound: bad value for " + std::string(key));
    }
    if (key == "select") b.scope.max_select = v;
    else if (key == "where") b.scope.max_where = v;
    else if (key == "group") b.scope.max_group = v;
    else if (key == "order") b.scope.max_order = v;
    else if (key == "joins") b.scope.max_join_edges = static_cast<std::size_t>(v);
    else if (key == "having") b.scope.allow_having = v != 0;
    else if (key == "set") b.max_set_size = v;
    else if (key == "depth") b.join_expand_depth = v;
    else throw Error("bound: unknown key " + std::string(key));
  }
  return b;
}

std::string to_string(const OracleBound& b) {
  return "select=" + std::to_string(b.scope.max_select) + ",where=" + std::to_string(b.scope.max_where) +
         ",group=" + std::to_string(b.scope.max_group) + ",order=" + std::to_string(b.scope.max_order) +
         ",joins=" + std::to_string(b.scope.max_join_edges) +
         ",having=" + std::to_string(b.scope.allow_having ? 1 : 0) +
         ",set=" + std::to_string(b.max_set_size) + ",depth=" + std::to_string(b.join_expand_depth);
}

namespace {

std::vector<Agg> aggs_of(const SchemaCatalog& cat, ColumnId c) {
  if (c == kStar) return {Agg::kCount};
  if (cat.type_of(c) == SemanticType::kText) return {Agg::kNone, Agg::kCount};
  return {Agg::kNone, Agg::kMax, Agg::kMin, Agg::kSum, Agg::kCount, Agg::kAvg};
}

std::vector<CmpOp> ops_of(SemanticType t) {
  if (t == SemanticType::kText) return {CmpOp::kEq, CmpOp::kNe, CmpOp::kLike};
  return {CmpOp::kEq, CmpOp::kNe, CmpOp::kGt, CmpOp::kLt, CmpOp::kGe, CmpOp::kLe, CmpOp::kBetween};
}

SemanticType output_type(const SchemaCatalog& cat, const AggColumn& it) {
  if (it.column == kStar) return SemanticType::kNumber;
  if (*it.agg == Agg::kNone || *it.agg == Agg::kMax || *it.agg == Agg::kMin) {
    return cat.type_of(it.column);
  }
  return SemanticType::kNumber;
}

// Multiset of values with removal by value.
using Bag = std::vector<Value>;

bool take(Bag& bag, const Value& v) {
  auto it = std::find(bag.begin(), bag.end(), v);
  if (it == bag.end()) return false;
  bag.erase(it);
  return true;
}

std::vector<Value> distinct_of(const Bag& bag, SemanticType t) {
  std::vector<Value> out;
  for (const auto& v : bag) {
    if (v.type() == t && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

// All trees over schema edges that contain every terminal and extend some
// minimum-weight Steiner tree by at most `depth` edges. By brute force over
// edge subsets.
class JoinFamily {
 public:
  JoinFamily(const SchemaCatalog& cat, int depth, std::size_t max_edges)
      : cat_(cat), depth_(depth), max_edges_(max_edges) {}

  const std::vector<JoinPath>& get(const std::vector<TableId>& terminals) {
    auto it = memo_.find(terminals);
    if (it != memo_.end()) return it->second;
    return memo_[terminals] = compute(terminals);
  }

 private:
  struct Tree {
    std::vector<std::size_t> edges;
    std::vector<TableId> tables;
    double weight;
  };

  std::optional<Tree> as_tree(unsigned mask) const {
    auto edges = cat_.edges();
    std::vector<std::size_t> chosen;
    std::set<TableId> nodes;
    double w = 0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!(mask >> e & 1u)) continue;
      chosen.push_back(e);
      nodes.insert(cat_.table_of(edges[e].from));
      nodes.insert(cat_.table_of(edges[e].to));
      w += edges[e].weight;
    }
    if (chosen.size() + 1 != nodes.size()) return std::nullopt;
    // connectivity via union-find
    std::map<TableId, TableId> parent;
    for (TableId t : nodes) parent[t] = t;
    std::function<TableId(TableId)> find = [&](TableId x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t e : chosen) {
      TableId a = find(cat_.table_of(edges[e].from));
      TableId b = find(cat_.table_of(edges[e].to));
      if (a == b) return std::nullopt;
      parent[a] = b;
    }
    return Tree{chosen, {nodes.begin(), nodes.end()}, w};
  }

  std::vector<JoinPath> compute(const std::vector<TableId>& terminals) const {
    std::vector<JoinPath> out;
    if (terminals.empty()) {
      for (TableId t = 0; t < static_cast<TableId>(cat_.table_count()); ++t) out.push_back({{t}, {}});
      return out;
    }
    std::size_t m = cat_.edges().size();
    if (m > 20) throw Error("oracle: schema too large for brute-force join enumeration");
    std::vector<Tree> trees;
    if (terminals.size() == 1) trees.push_back({{}, terminals, 0});
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      auto t = as_tree(mask);
      if (!t) continue;
      if (!std::includes(t->tables.begin(), t->tables.end(), terminals.begin(), terminals.end())) {
        continue;
      }
      trees.push_back(std::move(*t));
    }
    if (trees.empty()) return out;
    double best = trees.front().weight;
    for (const auto& t : trees) best = std::min(best, t.weight);
    std::vector<const Tree*> minimal;
    for (const auto& t : trees) {
      if (std::abs(t.weight - best) < 1e-9) minimal.push_back(&t);
    }
    for (const auto& t : trees) {
      bool ok = std::any_of(minimal.begin(), minimal.end(), [&](const Tree* s) {
        return std::includes(t.edges.begin(), t.edges.end(), s->edges.begin(), s->edges.end()) &&
               std::includes(t.tables.begin(), t.tables.end(), s->tables.begin(), s->tables.end()) &&
               t.edges.size() <= s->edges.size() + static_cast<std::size_t>(depth_);
      });
      if (ok && t.edges.size() <= max_edges_) out.push_back({t.tables, t.edges});
    }
    return out;
  }

  const SchemaCatalog& cat_;
  int depth_;
  std::size_t max_edges_;
  std::map<std::vector<TableId>, std::vector<JoinPath>> memo_;
};

struct WhereOption {
  std::vector<Predicate> preds;
  std::vector<std::optional<Connective>> conns;
  Bag rest;
};

void assign_values(const std::vector<Predicate>& shape, std::size_t i, std::vector<Predicate>& cur,
                   Bag& bag, const SchemaCatalog& cat,
                   const std::function<void(const std::vector<Predicate>&, const Bag&)>& sink) {
  if (i == shape.size()) {
    sink(cur, bag);
    return;
  }
  Predicate p = shape[i];
  SemanticType t = cat.type_of(p.column);
  auto values = distinct_of(bag, t);
  if (*p.op == CmpOp::kBetween) {
    std::sort(values.begin(), values.end(),
              [](const Value& a, const Value& b) { return a.number() < b.number(); });
    for (std::size_t a = 0; a < values.size(); ++a) {
      for (std::size_t b = a + 1; b < values.size(); ++b) {
        Bag next = bag;
        take(next, values[a]);
        take(next, values[b]);
        p.value = PredicateValue{values[a], values[b]};
        cur.push_back(p);
        assign_values(shape, i + 1, cur, next, cat, sink);
        cur.pop_back();
      }
    }
    return;
  }
  for (const auto& v : values) {
    Bag next = bag;
    take(next, v);
    p.value = PredicateValue{v, std::nullopt};
    cur.push_back(p);
    assign_values(shape, i + 1, cur, next, cat, sink);
    cur.pop_back();
  }
}

std::vector<WhereOption> where_options(const SchemaCatalog& cat, const OracleBound& b,
                                       const Bag& literals) {
  std::vector<WhereOption> out;
  int cap = std::min(b.max_set_size, b.scope.max_where);
  std::vector<ColumnId> cols(cat.column_count());
  std::iota(cols.begin(), cols.end(), 0);
  std::vector<ColumnId> cur;
  std::function<void(std::size_t)> multisets = [&](std::size_t start) {
    if (!cur.empty()) {
      // every op assignment
      std::vector<Predicate> shape;
      std::function<void(std::size_t)> ops = [&](std::size_t i) {
        if (i == cur.size()) {
          std::vector<Predicate> acc;
          Bag bag = literals;
          assign_values(shape, 0, acc, bag, cat, [&](const std::vector<Predicate>& preds, const Bag& rest) {
            for (std::size_t ands = 0; ands < preds.size(); ++ands) {
              std::vector<std::optional<Connective>> conns;
              for (std::size_t g = 0; g + 1 < preds.size(); ++g) {
                conns.push_back(g < ands ? Connective::kAnd : Connective::kOr);
              }
              out.push_back({preds, conns, rest});
            }
          });
          return;
        }
        for (CmpOp op : ops_of(cat.type_of(cur[i]))) {
          shape.push_back({cur[i], op, std::nullopt});
          ops(i + 1);
          shape.pop_back();
        }
      };
      ops(0);
    }
    if (static_cast<int>(cur.size()) == cap) return;
    for (std::size_t i = start; i < cols.size(); ++i) {
      cur.push_back(cols[i]);
      multisets(i);
      cur.pop_back();
    }
  };
  multisets(0);
  return out;
}

void item_lists(const SchemaCatalog& cat, const std::vector<ColumnId>& columns,
                std::vector<std::vector<AggColumn>>& out) {
  std::vector<AggColumn> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == columns.size()) {
      out.push_back(cur);
      return;
    }
    for (Agg a : aggs_of(cat, columns[i])) {
      cur.push_back({columns[i], a});
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

bool positive_integer(const Value& v) {
  return v.is_number() && v.number() >= 1 && v.number() == std::floor(v.number()) && v.number() < 1e9;
}

bool clauses_ok(const PartialQuery& q, const std::optional<TableSketchQuery>& tsq) {
  if (!tsq) return true;
  bool order = q.clauses->order_by;
  int limit = order ? q.order_tail->limit : 0;
  if (tsq->sorted != order) return false;
  return (tsq->limit > 0) == (limit > 0);
}

bool literals_ok(const PartialQuery& q, const std::vector<Literal>& literals) {
  Bag used;
  if (q.where) {
    for (const auto& p : *q.where) {
      used.push_back(p.value->lo);
      if (p.value->hi) used.push_back(*p.value->hi);
    }
  }
  if (q.having.value) used.push_back(*q.having.value);
  if (q.order_tail && q.order_tail->limit > 0) used.push_back(Value(double(q.order_tail->limit)));
  for (const auto& l : literals) {
    if (!take(used, l)) return false;
  }
  return true;
}

bool result_ok(const PartialQuery& q, const SchemaCatalog& cat, Database& db,
               const TableSketchQuery& tsq, std::size_t& executed) {
  ResultMeta meta;
  meta.has_order_by = q.clauses->order_by;
  for (const auto& it : *q.select) meta.projected_types.push_back(output_type(cat, it));
  if (!tsq.types.empty() && meta.projected_types != tsq.types) return false;
  if (tsq.tuples.empty() && tsq.limit == 0) return true;
  ++executed;
  auto rs = db.query(render_sql(q, cat, RenderMode::kExecutable));
  return satisfies(tsq, rs.rows, meta);
}

}  // namespace

bool oracle_accepts(const PartialQuery& q, const SchemaCatalog& catalog, Database& db,
                    const std::optional<TableSketchQuery>& tsq,
                    const std::vector<Literal>& literals) {
  if (!is_complete(q)) return false;
  if (!clauses_ok(q, tsq) || verify_semantics(q, catalog) || !literals_ok(q, literals)) return false;
  std::size_t executed = 0;
  return !tsq || result_ok(q, catalog, db, *tsq, executed);
}

OracleResult oracle_enumerate(const OracleBound& bound, const SchemaCatalog& catalog, Database& db,
                              const std::optional<TableSketchQuery>& tsq,
                              const std::vector<Literal>& literals) {
  OracleResult result;
  const ScopeBound& sb = bound.scope;
  JoinFamily joins(catalog, bound.join_expand_depth, sb.max_join_edges);
  const int k = tsq ? tsq->limit : 0;

  std::vector<ColumnId> with_star{kStar};
  for (ColumnId c = 0; c < static_cast<ColumnId>(catalog.column_count()); ++c) with_star.push_back(c);

  // SELECT lists: ordered distinct columns, every aggregate assignment.
  std::vector<std::vector<AggColumn>> selects;
  {
    int cap = std::min(bound.max_set_size, sb.max_select);
    std::vector<ColumnId> cur;
    std::function<void()> rec = [&] {
      if (!cur.empty()) item_lists(catalog, cur, selects);
      if (static_cast<int>(cur.size()) == cap) return;
      for (ColumnId c : with_star) {
        if (std::find(cur.begin(), cur.end(), c) != cur.end()) continue;
        cur.push_back(c);
        rec();
        cur.pop_back();
      }
    };
    rec();
  }
  // Sorted subsets of `pool` up to `cap` elements.
  auto sorted_subsets = [](const std::vector<ColumnId>& pool, int cap) {
    std::vector<std::vector<ColumnId>> out;
    std::vector<ColumnId> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (!cur.empty()) out.push_back(cur);
      if (static_cast<int>(cur.size()) == cap) return;
      for (std::size_t i = start; i < pool.size(); ++i) {
        cur.push_back(pool[i]);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
    return out;
  };
  std::vector<ColumnId> plain(with_star.begin() + 1, with_star.end());
  auto group_sets = sorted_subsets(plain, std::min(bound.max_set_size, sb.max_group));
  std::vector<std::vector<AggColumn>> orders;
  for (const auto& cols : sorted_subsets(with_star, std::min(bound.max_set_size, sb.max_order))) {
    item_lists(catalog, cols, orders);
  }
  std::vector<AggColumn> having_targets{{kStar, Agg::kCount}};
  for (ColumnId c : plain) {
    if (catalog.type_of(c) != SemanticType::kNumber) continue;
    for (Agg a : {Agg::kMax, Agg::kMin, Agg::kSum, Agg::kCount, Agg::kAvg}) having_targets.push_back({c, a});
  }

  Bag lits(literals.begin(), literals.end());
  auto wheres = sb.max_where > 0 && !literals.empty() ? where_options(catalog, bound, lits)
                                                      : std::vector<WhereOption>{};

  // Dropping ORDER BY and LIMIT yields a superset of rows, and unordered
  // tuple matching is monotone, so a miss here rules out every ordering.
  // Keyed by join path; reset whenever the pre-ORDER BY query changes.
  std::map<std::pair<std::vector<TableId>, std::vector<std::size_t>>, bool> base_memo;
  auto base_ok = [&](const PartialQuery& q) {
    if (!tsq || tsq->tuples.empty()) return true;
    auto key = std::make_pair(q.join_path->tables, q.join_path->edges);
    auto it = base_memo.find(key);
    if (it != base_memo.end()) return it->second;
    PartialQuery base = q;
    base.clauses->order_by = false;
    base.order_by.reset();
    base.order_tail.reset();
    ++result.executed;
    TableSketchQuery loose = *tsq;
    loose.sorted = false;
    loose.limit = 0;
    ResultMeta meta;
    for (const auto& item : *base.select) meta.projected_types.push_back(output_type(catalog, item));
    bool ok = satisfies(loose, db.query(render_sql(base, catalog, RenderMode::kExecutable)).rows, meta);
    return base_memo[key] = ok;
  };

  auto finish = [&](PartialQuery q, const Bag& rest) {
    // LIMIT options depend on the literals still unconsumed.
    std::vector<std::optional<OrderTail>> tails;
    if (q.clauses->order_by) {
      std::set<int> limits{0, 1};
      if (k > 0) limits.insert(k);
      for (const auto& v : rest) {
        if (positive_integer(v)) limits.insert(static_cast<int>(v.number()));
      }
      for (Direction d : {Direction::kAsc, Direction::kDesc}) {
        for (int l : limits) tails.push_back(OrderTail{d, l});
      }
    } else {
      tails.push_back(std::nullopt);
    }
    for (const auto& tail : tails) {
      q.order_tail = tail;
      ++result.generated;
      if (!clauses_ok(q, tsq) || !literals_ok(q, literals)) continue;
      for (const JoinPath& jp : joins.get(referenced_tables(q, catalog))) {
        q.join_path = jp;
        if (q.clauses->order_by && !base_ok(q)) continue;
        if (verify_semantics(q, catalog)) continue;
        if (tsq && !result_ok(q, catalog, db, *tsq, result.executed)) continue;
        if (result.keys.insert(canonical_key(q, catalog)).second) result.queries.push_back(q);
      }
      q.join_path.reset();
    }
  };

  // The checks below are the final acceptance tests hoisted to the earliest
  // point where they are decided, so they only skip doomed branches.
  auto types_ok = [&](const std::vector<AggColumn>& sel) {
    if (!tsq || tsq->types.empty()) return true;
    if (sel.size() != tsq->types.size()) return false;
    for (std::size_t i = 0; i < sel.size(); ++i) {
      if (output_type(catalog, sel[i]) != tsq->types[i]) return false;
    }
    return true;
  };
  // Literals left over must fit in an optional HAVING value and LIMIT.
  auto can_consume = [](const Bag& rest, bool having_open, bool order) {
    std::size_t slots = (having_open ? 1 : 0) + (order ? 1 : 0);
    if (rest.size() > slots) return false;
    if (!having_open) {
      return rest.empty() || positive_integer(rest.front());
    }
    return std::all_of(rest.begin(), rest.end(), [](const Value& v) { return v.is_number(); });
  };

  for (const auto& sel : selects) {
    if (!types_ok(sel)) continue;
    for (int mask = 0; mask < 8; ++mask) {
      ClauseSet cs{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
      if (tsq && tsq->sorted != cs.order_by) continue;
      if (cs.where && wheres.empty()) continue;
      if (cs.group_by && sb.max_group <= 0) continue;
      if (cs.order_by && sb.max_order <= 0) continue;
      PartialQuery base;
      base.select = sel;
      base.clauses = cs;

      std::vector<std::pair<PartialQuery, Bag>> stage1;
      if (cs.where) {
        for (const auto& w : wheres) {
          PartialQuery q = base;
          q.where = w.preds;
          q.connectives = w.conns;
          stage1.emplace_back(std::move(q), w.rest);
        }
      } else {
        stage1.emplace_back(base, lits);
      }
      for (auto& [q1, rest1] : stage1) {
        if (!can_consume(rest1, cs.group_by && sb.allow_having, cs.order_by)) continue;
        std::vector<std::pair<PartialQuery, Bag>> stage2;
        if (cs.group_by) {
          for (const auto& g : group_sets) {
            PartialQuery q = q1;
            q.group_by = g;
            q.has_having = false;
            if (can_consume(rest1, false, cs.order_by)) stage2.emplace_back(q, rest1);
            if (!sb.allow_having) continue;
            for (const auto& v : distinct_of(rest1, SemanticType::kNumber)) {
              Bag rest = rest1;
              take(rest, v);
              if (!can_consume(rest, false, cs.order_by)) continue;
              for (const auto& target : having_targets) {
                for (CmpOp op : {CmpOp::kEq, CmpOp::kNe, CmpOp::kGt, CmpOp::kLt, CmpOp::kGe, CmpOp::kLe}) {
                  PartialQuery h = q;
                  h.has_having = true;
                  h.having = {target, op, v};
                  stage2.emplace_back(std::move(h), rest);
                }
              }
            }
          }
        } else {
          stage2.emplace_back(q1, rest1);
        }
        for (auto& [q2, rest2] : stage2) {
          if (cs.order_by) {
            base_memo.clear();
            for (const auto& items : orders) {
              PartialQuery q = q2;
              q.order_by = items;
              finish(std::move(q), rest2);
            }
          } else {
            finish(q2, rest2);
          }
        }
      }
    }
  }
  std::sort(result.queries.begin(), result.queries.end(),
            [&](const PartialQuery& a, const PartialQuery& b) {
              return canonical_key(a, catalog) < canonical_key(b, catalog);
            });
  return result;
}

}  // namespace dualsql
