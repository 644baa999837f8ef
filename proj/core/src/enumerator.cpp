// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/enumerator.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <unordered_set>

#include "dualsql/error.hpp"

namespace dualsql {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kGpqe: return "gpqe";
    case Mode::kNoGuide: return "noguide";
    case Mode::kNoPq: return "nopq";
  }
  return "?";
}

Mode mode_from_string(std::string_view name) {
  if (name == "gpqe") return Mode::kGpqe;
  if (name == "noguide") return Mode::kNoGuide;
  if (name == "nopq") return Mode::kNoPq;
  throw Error("unknown mode: " + std::string(name));
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kExhausted: return "done";
    case Termination::kTimeout: return "timeout";
    case Termination::kMaxCandidates: return "max_candidates";
    case Termination::kMaxExpansions: return "max_expansions";
    case Termination::kStopped: return "stopped";
    case Termination::kError: return "error";
  }
  return "?";
}

Enumerator::Enumerator(const SchemaCatalog& catalog, Database& db, const GuidanceModel& model,
                       const ValueIndex* index)
    : catalog_(catalog), db_(db), model_(model), index_(index), graph_(catalog) {}

GuidanceContext Enumerator::context(const TaskInputs& inputs, const EnumConfig& config) const {
  GuidanceContext ctx;
  ctx.catalog = &catalog_;
  ctx.index = index_;
  ctx.nlq = inputs.nlq;
  ctx.literals = inputs.literals;
  ctx.bound = config.bound;
  ctx.max_set_size = config.max_set_size;
  ctx.tsq_limit = inputs.tsq ? inputs.tsq->limit : 0;
  return ctx;
}

namespace {

std::vector<JoinPath> join_candidates(const PartialQuery& pq, const SchemaCatalog& catalog,
                                      const SchemaGraph& graph, const JoinOptions& options,
                                      std::size_t max_edges) {
  auto paths = construct_join_paths(referenced_tables(pq, catalog), graph, options);
  std::erase_if(paths, [&](const JoinPath& jp) { return jp.edges.size() > max_edges; });
  return paths;
}

}  // namespace

std::pair<std::vector<SearchState>, bool> Enumerator::children(const SearchState& state,
                                                               const GuidanceContext& ctx,
                                                               const EnumConfig& config) const {
  auto point = next_decision(state.pq);
  if (!point) throw DecisionError("children() of a complete state");
  std::vector<SearchState> out;
  if (point->module == Module::kJoin) {
    JoinOptions options{config.join_expand_depth, config.max_join_paths};
    for (JoinPath& jp : join_candidates(state.pq, catalog_, graph_, options,
                                        config.bound.max_join_edges)) {
      SearchState child;
      child.join_len = jp.tables.size();
      child.pq = apply_decision(state.pq, catalog_, *point, jp);
      child.confidence = state.confidence;
      child.trace = state.trace;
      child.trace.push_back({*point, std::move(jp), 1.0});
      out.push_back(std::move(child));
    }
    return {std::move(out), true};
  }
  for (ScoredChoice& sc : score_choices(model_, ctx, state.pq, *point)) {
    SearchState child;
    child.pq = apply_decision(state.pq, catalog_, *point, sc.choice);
    child.confidence = state.confidence * sc.score;
    child.join_len = state.join_len;
    child.trace = state.trace;
    child.trace.push_back({*point, std::move(sc.choice), sc.score});
    out.push_back(std::move(child));
  }
  return {std::move(out), false};
}

namespace {

struct QueueEntry {
  double confidence;
  std::size_t join_len;
  std::string key;
  SearchState state;
};

struct Lower {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.confidence != b.confidence) return a.confidence < b.confidence;
    if (a.join_len != b.join_len) return a.join_len > b.join_len;
    return a.key > b.key;
  }
};

}  // namespace

EnumReport Enumerator::run(const TaskInputs& inputs, const EnumConfig& config,
                           const CandidateSink& emit) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  EnumReport report;
  GuidanceContext ctx = context(inputs, config);
  Verifier verifier(catalog_, db_, inputs.tsq, inputs.literals);

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, Lower> best_first;
  std::deque<SearchState> fifo;
  const bool bfs = config.mode == Mode::kNoGuide;
  auto push = [&](SearchState s) {
    if (bfs) {
      fifo.push_back(std::move(s));
    } else {
      std::string key = render_sql(s.pq, catalog_, RenderMode::kDisplay);
      double c = s.confidence;
      std::size_t j = s.join_len;
      best_first.push({c, j, std::move(key), std::move(s)});
    }
  };
  auto pending = [&] { return bfs ? !fifo.empty() : !best_first.empty(); };
  auto pop = [&] {
    SearchState s;
    if (bfs) {
      s = std::move(fifo.front());
      fifo.pop_front();
    } else {
      s = std::move(const_cast<QueueEntry&>(best_first.top()).state);
      best_first.pop();
    }
    return s;
  };

  std::unordered_set<std::string> seen;
  std::unordered_set<std::string> emitted;
  push(SearchState{});

  auto finish = [&](Termination t) {
    report.termination = t;
    report.probes = verifier.probes_executed();
    report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
  };
  auto timed_out = [&] { return Clock::now() - start >= config.timeout; };

  try {
    while (pending()) {
      if (config.stop.stop_requested()) return finish(Termination::kStopped);
      if (timed_out()) return finish(Termination::kTimeout);
      if (config.max_expansions && report.expansions >= config.max_expansions) {
        return finish(Termination::kMaxExpansions);
      }
      SearchState state = pop();
      if (is_complete(state.pq)) {
        // Emitting on pop keeps emission in confidence order.
        if (!emitted.insert(canonical_key(state.pq, catalog_)).second) continue;
        Candidate cand;
        cand.rank = ++report.candidates;
        cand.sql = render_sql(state.pq, catalog_, RenderMode::kExecutable);
        cand.confidence = state.confidence;
        cand.probes_at_emit = verifier.probes_executed();
        cand.state = std::move(state);
        emit(cand);
        if (config.max_candidates && report.candidates >= config.max_candidates) {
          return finish(Termination::kMaxCandidates);
        }
        continue;
      }
      ++report.expansions;
      auto [kids, join_fanout] = children(state, ctx, config);
      report.generated += kids.size();
      if (config.observer) config.observer(state, kids, join_fanout);
      for (SearchState& child : kids) {
        if (config.stop.stop_requested()) return finish(Termination::kStopped);
        if (!seen.insert(structural_key(child.pq)).second) continue;
        bool complete = is_complete(child.pq);
        if (config.mode != Mode::kNoPq || complete) {
          VerificationOutcome v = verifier.verify(child.pq);
          if (!v.passed) {
            ++report.pruned;
            ++report.pruned_by_stage[*v.failed_stage];
            continue;
          }
        }
        push(std::move(child));
      }
    }
  } catch (const EngineError& e) {
    report.error = e.what();
    return finish(Termination::kError);
  }
  return finish(Termination::kExhausted);
}

namespace {

bool subset_of(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}
bool subset_of(const std::vector<TableId>& a, const std::vector<TableId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Gold predicates rearranged into the schedule's shape: a sorted column
// multiset whose leading run forms the AND group.
std::optional<std::vector<std::pair<Predicate, bool>>> arrange_where(const PartialQuery& gold) {
  const auto& preds = *gold.where;
  std::size_t and_size = 1;
  while (and_size < preds.size() && gold.connectives[and_size - 1] == Connective::kAnd) ++and_size;
  // pair.second: predicate belongs to the leading AND group
  std::vector<std::pair<Predicate, bool>> out;
  for (std::size_t i = 0; i < preds.size(); ++i) out.push_back({preds[i], i < and_size});
  bool pure = and_size == preds.size() || and_size == 1;
  if (pure) {
    for (auto& p : out) p.second = and_size == preds.size();
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.first.column < b.first.column; });
    if (and_size == 1 && !out.empty()) out.front().second = true;
    return out;
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.column != b.first.column) return a.first.column < b.first.column;
    return a.second && !b.second;
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].second != (i < and_size)) return std::nullopt;
  }
  return out;
}

}  // namespace

std::optional<DecisionTrace> derive_trace(const PartialQuery& gold, const SchemaCatalog& catalog,
                                          const JoinOptions& options,
                                          std::size_t max_join_edges) {
  if (!is_complete(gold) || !gold.join_path) return std::nullopt;
  SchemaGraph graph(catalog);
  std::vector<std::pair<Predicate, bool>> where;
  if (gold.where) {
    auto arranged = arrange_where(gold);
    if (!arranged) return std::nullopt;
    where = std::move(*arranged);
  }
  DecisionTrace trace;
  PartialQuery pq = new_root();
  while (auto point = next_decision(pq)) {
    Choice choice;
    switch (point->module) {
      case Module::kJoin: {
        std::optional<JoinPath> pick;
        for (auto& jp : join_candidates(pq, catalog, graph, options, max_join_edges)) {
          if (!subset_of(jp.tables, gold.join_path->tables) ||
              !subset_of(jp.edges, gold.join_path->edges)) {
            continue;
          }
          if (!pick || jp.tables.size() > pick->tables.size()) pick = jp;
        }
        if (!pick) return std::nullopt;
        choice = *pick;
        break;
      }
      case Module::kCol: {
        std::vector<ColumnId> cols;
        if (point->slot == Slot::kSelect) {
          for (const auto& it : *gold.select) cols.push_back(it.column);
        } else if (point->slot == Slot::kWhere) {
          for (const auto& p : where) cols.push_back(p.first.column);
        } else if (point->slot == Slot::kGroupBy) {
          cols = *gold.group_by;
          std::sort(cols.begin(), cols.end());
        } else {
          for (const auto& it : *gold.order_by) cols.push_back(it.column);
          std::sort(cols.begin(), cols.end());
        }
        choice = cols;
        break;
      }
      case Module::kAgg:
        if (point->slot == Slot::kHaving) {
          choice = *gold.having.target;
        } else if (point->slot == Slot::kSelect) {
          choice = *(*gold.select)[point->index].agg;
        } else {
          ColumnId c = (*pq.order_by)[point->index].column;
          auto it = std::find_if(gold.order_by->begin(), gold.order_by->end(),
                                 [&](const AggColumn& a) { return a.column == c; });
          choice = *it->agg;
        }
        break;
      case Module::kKw:
        choice = *gold.clauses;
        break;
      case Module::kOp:
        if (point->slot == Slot::kHaving) {
          choice = *gold.having.op;
        } else {
          choice = *where[point->index].first.op;
        }
        break;
      case Module::kAndOr:
        choice = where[point->index + 1].second ? Connective::kAnd : Connective::kOr;
        break;
      case Module::kValue:
        if (point->slot == Slot::kHaving) {
          choice = PredicateValue{*gold.having.value, std::nullopt};
        } else {
          choice = *where[point->index].first.value;
        }
        break;
      case Module::kHaving:
        choice = *gold.has_having;
        break;
      case Module::kDescAsc:
        choice = *gold.order_tail;
        break;
    }
    try {
      pq = apply_decision(pq, catalog, *point, choice);
    } catch (const DecisionError&) {
      return std::nullopt;
    }
    trace.push_back({*point, std::move(choice), 1.0});
  }
  if (!canonical_eq(pq, gold, catalog)) return std::nullopt;
  return trace;
}

}  // namespace dualsql
