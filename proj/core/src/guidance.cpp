// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/guidance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "dualsql/error.hpp"

namespace dualsql {

std::vector<std::string> tokenize_nlq(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (cur.size() > 3 && cur.back() == 's' && cur[cur.size() - 2] != 's') cur.pop_back();
    out.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::vector<CmpOp> operators_for(SemanticType type) {
  if (type == SemanticType::kText) return {CmpOp::kEq, CmpOp::kNe, CmpOp::kLike};
  return {CmpOp::kEq, CmpOp::kNe, CmpOp::kGt, CmpOp::kLt, CmpOp::kGe, CmpOp::kLe, CmpOp::kBetween};
}

std::vector<Agg> aggregates_for(const SchemaCatalog& catalog, ColumnId column) {
  if (column == kStar) return {Agg::kCount};
  if (catalog.type_of(column) == SemanticType::kText) return {Agg::kNone, Agg::kCount};
  return {Agg::kNone, Agg::kMax, Agg::kMin, Agg::kSum, Agg::kCount, Agg::kAvg};
}

namespace {

void permutations(const std::vector<ColumnId>& pool, std::size_t k, std::vector<ColumnId>& cur,
                  std::vector<char>& used, std::vector<Choice>& out) {
  if (cur.size() == k) {
    out.emplace_back(cur);
    return;
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    cur.push_back(pool[i]);
    permutations(pool, k, cur, used, out);
    cur.pop_back();
    used[i] = 0;
  }
}

void combinations(const std::vector<ColumnId>& pool, std::size_t k, std::size_t start,
                  bool repeat, std::vector<ColumnId>& cur, std::vector<std::vector<ColumnId>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < pool.size(); ++i) {
    cur.push_back(pool[i]);
    combinations(pool, k, repeat ? i : i + 1, repeat, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<ColumnId>> subsets(const std::vector<ColumnId>& pool, int max_size,
                                           bool repeat) {
  std::vector<std::vector<ColumnId>> out;
  std::vector<ColumnId> cur;
  for (int k = 1; k <= max_size; ++k) combinations(pool, k, 0, repeat, cur, out);
  return out;
}

std::vector<ColumnId> all_columns(const SchemaCatalog& catalog, bool with_star) {
  std::vector<ColumnId> cols;
  if (with_star) cols.push_back(kStar);
  for (ColumnId c = 0; c < static_cast<ColumnId>(catalog.column_count()); ++c) cols.push_back(c);
  return cols;
}

bool is_positive_integer(const Value& v) {
  return v.is_number() && v.number() >= 1 && v.number() == std::floor(v.number()) &&
         v.number() < 1e9;
}

std::vector<Value> distinct_values(const std::vector<Literal>& lits, SemanticType type) {
  std::vector<Value> out;
  for (const auto& l : lits) {
    if (l.type() != type) continue;
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  }
  return out;
}

// Whether the open WHERE values in `preds` can still be drawn from `bag`.
// An open operator needs one value of its column's type; BETWEEN needs two
// distinct numbers.
bool fillable(const SchemaCatalog& cat, const std::vector<Predicate>& preds, std::size_t i,
              std::vector<Literal>& bag) {
  while (i < preds.size() && preds[i].value) ++i;
  if (i == preds.size()) return true;
  SemanticType type = cat.type_of(preds[i].column);
  auto values = distinct_values(bag, type);
  auto take = [&](const Value& v) { bag.erase(std::find(bag.begin(), bag.end(), v)); };
  if (preds[i].op && *preds[i].op == CmpOp::kBetween) {
    for (std::size_t a = 0; a < values.size(); ++a) {
      for (std::size_t b = a + 1; b < values.size(); ++b) {
        auto saved = bag;
        take(values[a]);
        take(values[b]);
        bool ok = fillable(cat, preds, i + 1, bag);
        bag = std::move(saved);
        if (ok) return true;
      }
    }
    return false;
  }
  for (const auto& v : values) {
    auto saved = bag;
    take(v);
    bool ok = fillable(cat, preds, i + 1, bag);
    bag = std::move(saved);
    if (ok) return true;
  }
  return false;
}

}  // namespace

std::vector<Choice> legal_choices(const GuidanceContext& ctx, const PartialQuery& pq,
                                  const DecisionPoint& point) {
  const SchemaCatalog& cat = *ctx.catalog;
  const ScopeBound& b = ctx.bound;
  std::vector<Choice> out;
  switch (point.module) {
    case Module::kCol: {
      if (point.slot == Slot::kSelect) {
        auto pool = all_columns(cat, true);
        int k = std::min(ctx.max_set_size, b.max_select);
        for (int size = 1; size <= k; ++size) {
          std::vector<ColumnId> cur;
          std::vector<char> used(pool.size(), 0);
          permutations(pool, size, cur, used, out);
        }
      } else if (point.slot == Slot::kWhere) {
        auto rest = unconsumed_literals(pq, ctx.literals);
        int nt = 0, nn = 0;
        for (const auto& l : rest) (l.is_text() ? nt : nn)++;
        int k = std::min(ctx.max_set_size, b.max_where);
        for (auto& cols : subsets(all_columns(cat, false), k, true)) {
          int t = 0, n = 0;
          for (ColumnId c : cols) (cat.type_of(c) == SemanticType::kText ? t : n)++;
          if (t <= nt && n <= nn) out.emplace_back(std::move(cols));
        }
      } else if (point.slot == Slot::kGroupBy) {
        int k = std::min(ctx.max_set_size, b.max_group);
        for (auto& cols : subsets(all_columns(cat, false), k, false)) out.emplace_back(std::move(cols));
      } else if (point.slot == Slot::kOrderBy) {
        int k = std::min(ctx.max_set_size, b.max_order);
        for (auto& cols : subsets(all_columns(cat, true), k, false)) out.emplace_back(std::move(cols));
      }
      break;
    }
    case Module::kAgg: {
      if (point.slot == Slot::kHaving) {
        out.emplace_back(AggColumn{kStar, Agg::kCount});
        for (ColumnId c = 0; c < static_cast<ColumnId>(cat.column_count()); ++c) {
          if (cat.type_of(c) != SemanticType::kNumber) continue;
          for (Agg a : {Agg::kMax, Agg::kMin, Agg::kSum, Agg::kCount, Agg::kAvg}) {
            out.emplace_back(AggColumn{c, a});
          }
        }
      } else {
        const auto& items = point.slot == Slot::kSelect ? *pq.select : *pq.order_by;
        for (Agg a : aggregates_for(cat, items.at(point.index).column)) out.emplace_back(a);
      }
      break;
    }
    case Module::kKw: {
      bool can_where = !ctx.literals.empty() && b.max_where > 0;
      for (int mask = 0; mask < 8; ++mask) {
        ClauseSet c{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
        if (c.where && !can_where) continue;
        if (c.group_by && b.max_group <= 0) continue;
        if (c.order_by && b.max_order <= 0) continue;
        out.emplace_back(c);
      }
      break;
    }
    case Module::kOp: {
      if (point.slot == Slot::kHaving) {
        for (CmpOp op : {CmpOp::kEq, CmpOp::kNe, CmpOp::kGt, CmpOp::kLt, CmpOp::kGe, CmpOp::kLe}) {
          out.emplace_back(op);
        }
      } else {
        auto rest = unconsumed_literals(pq, ctx.literals);
        auto preds = *pq.where;
        for (CmpOp op : operators_for(cat.type_of(preds.at(point.index).column))) {
          preds[point.index].op = op;
          if (fillable(cat, preds, 0, rest)) out.emplace_back(op);
        }
      }
      break;
    }
    case Module::kAndOr:
      out.emplace_back(Connective::kAnd);
      out.emplace_back(Connective::kOr);
      break;
    case Module::kValue: {
      auto rest = unconsumed_literals(pq, ctx.literals);
      if (point.slot == Slot::kHaving) {
        for (auto& v : distinct_values(rest, SemanticType::kNumber)) {
          out.emplace_back(PredicateValue{v, std::nullopt});
        }
        break;
      }
      const Predicate& p = pq.where->at(point.index);
      SemanticType type = cat.type_of(p.column);
      auto values = distinct_values(rest, type);
      auto offer = [&](PredicateValue pv) {
        auto bag = rest;
        bag.erase(std::find(bag.begin(), bag.end(), pv.lo));
        if (pv.hi) bag.erase(std::find(bag.begin(), bag.end(), *pv.hi));
        auto preds = *pq.where;
        preds[point.index].value = pv;
        if (fillable(cat, preds, 0, bag)) out.emplace_back(std::move(pv));
      };
      if (*p.op == CmpOp::kBetween) {
        std::sort(values.begin(), values.end(),
                  [](const Value& x, const Value& y) { return x.number() < y.number(); });
        for (std::size_t i = 0; i < values.size(); ++i) {
          for (std::size_t j = i + 1; j < values.size(); ++j) {
            offer(PredicateValue{values[i], values[j]});
          }
        }
      } else {
        for (auto& v : values) offer(PredicateValue{v, std::nullopt});
      }
      break;
    }
    case Module::kHaving: {
      out.emplace_back(false);
      if (b.allow_having) {
        auto rest = unconsumed_literals(pq, ctx.literals);
        if (std::any_of(rest.begin(), rest.end(), [](const Value& v) { return v.is_number(); })) {
          out.emplace_back(true);
        }
      }
      break;
    }
    case Module::kDescAsc: {
      std::set<int> limits{0, 1};
      if (ctx.tsq_limit > 0) limits.insert(ctx.tsq_limit);
      for (const auto& l : unconsumed_literals(pq, ctx.literals)) {
        if (is_positive_integer(l)) limits.insert(static_cast<int>(l.number()));
      }
      for (Direction d : {Direction::kAsc, Direction::kDesc}) {
        for (int l : limits) out.emplace_back(OrderTail{d, l});
      }
      break;
    }
    case Module::kJoin:
      throw DecisionError("join paths are not a guidance decision");
  }
  return out;
}

std::vector<ScoredChoice> score_choices(const GuidanceModel& model, const GuidanceContext& ctx,
                                        const PartialQuery& pq, const DecisionPoint& point) {
  std::vector<Choice> choices = legal_choices(ctx, pq, point);
  if (choices.empty()) return {};
  std::vector<double> w = model.weights(ctx, pq, point, choices);
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<ScoredChoice> out;
  out.reserve(choices.size());
  for (std::size_t i = 0; i < choices.size(); ++i) {
    out.push_back({std::move(choices[i]), w[i] / total, {}});
    out.back().label = describe_choice(*ctx.catalog, out.back().choice);
  }
  std::stable_sort(out.begin(), out.end(), [](const ScoredChoice& a, const ScoredChoice& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.label < b.label;
  });
  return out;
}

namespace {

class UniformModel : public GuidanceModel {
 public:
  std::string_view name() const override { return "uniform"; }
  std::vector<double> weights(const GuidanceContext&, const PartialQuery&, const DecisionPoint&,
                              const std::vector<Choice>& choices) const override {
    return std::vector<double>(choices.size(), 1.0);
  }
};

const std::map<std::string, std::string>& synonyms() {
  static const std::map<std::string, std::string> m = {
      {"yr", "year"}, {"born", "birth"}, {"num", "number"}, {"film", "movie"},
      {"paper", "publication"}, {"cited", "citation"}, {"citation", "citation"},
      {"university", "organization"}, {"institution", "organization"}, {"venue", "conference"}};
  return m;
}

std::string normalize_token(const std::string& t) {
  auto it = synonyms().find(t);
  return it == synonyms().end() ? t : it->second;
}

std::vector<std::string> name_tokens(std::string_view name) {
  auto toks = tokenize_nlq(name);
  for (auto& t : toks) t = normalize_token(t);
  return toks;
}

// Cue phrases are matched as token subsequences of the normalized NLQ.
struct Cues {
  std::vector<std::string> toks;

  // Position of the first occurrence of `phrase`, or npos.
  std::size_t find(std::string_view phrase) const {
    auto p = name_tokens(phrase);
    if (p.empty() || p.size() > toks.size()) return std::string::npos;
    for (std::size_t i = 0; i + p.size() <= toks.size(); ++i) {
      if (std::equal(p.begin(), p.end(), toks.begin() + static_cast<std::ptrdiff_t>(i))) return i;
    }
    return std::string::npos;
  }
  // Every start position of `phrase`.
  std::vector<std::size_t> all(std::string_view phrase) const {
    std::vector<std::size_t> out;
    auto p = name_tokens(phrase);
    if (p.empty() || p.size() > toks.size()) return out;
    for (std::size_t i = 0; i + p.size() <= toks.size(); ++i) {
      if (std::equal(p.begin(), p.end(), toks.begin() + static_cast<std::ptrdiff_t>(i))) {
        out.push_back(i);
      }
    }
    return out;
  }
  bool has(std::string_view phrase) const { return find(phrase) != std::string::npos; }
  bool any(std::initializer_list<std::string_view> phrases) const {
    return std::any_of(phrases.begin(), phrases.end(), [&](auto p) { return has(p); });
  }
  std::size_t first(std::initializer_list<std::string_view> phrases) const {
    std::size_t best = std::string::npos;
    for (auto p : phrases) best = std::min(best, find(p));
    return best;
  }
};

const std::initializer_list<std::string_view> kCountCues = {"how many", "number of", "count"};
const std::initializer_list<std::string_view> kMaxCues = {"most", "highest", "maximum", "max",
                                                          "largest", "greatest"};
const std::initializer_list<std::string_view> kMinCues = {"least", "lowest", "minimum", "min",
                                                          "smallest", "fewest"};
const std::initializer_list<std::string_view> kAvgCues = {"average", "avg", "mean"};
const std::initializer_list<std::string_view> kSumCues = {"total", "sum"};
const std::initializer_list<std::string_view> kGroupCues = {"each", "per", "every", "group"};
const std::initializer_list<std::string_view> kOrderCues = {
    "order", "ordered", "sort", "sorted", "earliest", "latest", "oldest", "newest", "recent",
    "ascending", "descending", "rank", "top", "highest", "lowest", "most", "least", "largest",
    "smallest", "first", "alphabetical", "youngest"};
const std::initializer_list<std::string_view> kAscCues = {
    "earliest", "ascending", "oldest", "lowest", "least", "smallest", "fewest", "alphabetical",
    "increasing", "first"};
const std::initializer_list<std::string_view> kDescCues = {
    "descending", "latest", "newest", "highest", "most", "largest", "greatest", "decreasing",
    "youngest", "top"};
const std::initializer_list<std::string_view> kSuperlativeCues = {
    "most", "least", "highest", "lowest", "largest", "smallest", "top", "oldest", "youngest",
    "earliest", "latest", "fewest", "greatest", "maximum", "minimum"};
const std::initializer_list<std::string_view> kHavingCues = {
    "more than", "at least", "fewer than", "less than", "at most", "over", "having"};
const std::initializer_list<std::string_view> kTemporalCues = {
    "earliest", "latest", "oldest", "newest", "recent", "chronological", "when"};
const std::initializer_list<std::string_view> kOrCues = {"or", "either", "those", "as well as"};

std::initializer_list<std::string_view> op_cues(CmpOp op) {
  static const std::initializer_list<std::string_view> lt = {
      "before", "less than", "under", "below", "earlier than", "fewer than", "prior to"};
  static const std::initializer_list<std::string_view> gt = {
      "after", "more than", "over", "above", "later than", "greater than", "since"};
  static const std::initializer_list<std::string_view> ge = {"at least", "no less than"};
  static const std::initializer_list<std::string_view> le = {"at most", "no more than"};
  static const std::initializer_list<std::string_view> between = {"between"};
  static const std::initializer_list<std::string_view> ne = {"not", "other than", "except"};
  static const std::initializer_list<std::string_view> like = {"contain", "containing", "like",
                                                               "include", "including"};
  static const std::initializer_list<std::string_view> none = {};
  switch (op) {
    case CmpOp::kLt: return lt;
    case CmpOp::kGt: return gt;
    case CmpOp::kGe: return ge;
    case CmpOp::kLe: return le;
    case CmpOp::kBetween: return between;
    case CmpOp::kNe: return ne;
    case CmpOp::kLike: return like;
    case CmpOp::kEq: return none;
  }
  return none;
}

ColumnId display_column(const SchemaCatalog& cat, TableId t) {
  for (ColumnId c : cat.columns_of(t)) {
    if (cat.type_of(c) == SemanticType::kText) return c;
  }
  return kStar;
}

class LexicalModel : public GuidanceModel {
 public:
  explicit LexicalModel(LexicalConfig config) : config_(config) {}

  std::string_view name() const override { return "lexical"; }

  std::vector<double> weights(const GuidanceContext& ctx, const PartialQuery& pq,
                              const DecisionPoint& point,
                              const std::vector<Choice>& choices) const override {
    Cues cues{name_tokens(ctx.nlq)};
    std::vector<double> w;
    w.reserve(choices.size());
    for (const Choice& c : choices) w.push_back(raw(ctx, cues, pq, point, c) + config_.epsilon);
    return w;
  }

 private:
  double relevance(const GuidanceContext& ctx, const Cues& cues, ColumnId c,
                   bool literal_bonus = true) const {
    if (c == kStar) return cues.any(kCountCues) ? config_.w_agg : 0.0;
    const SchemaCatalog& cat = *ctx.catalog;
    auto overlap = [&](const std::vector<std::string>& toks) {
      if (toks.empty()) return 0.0;
      double hit = 0;
      for (const auto& t : toks) {
        if (std::find(cues.toks.begin(), cues.toks.end(), t) != cues.toks.end()) ++hit;
      }
      return hit / static_cast<double>(toks.size());
    };
    double table_hit = overlap(name_tokens(cat.table(cat.table_of(c)).name));
    double r = overlap(name_tokens(cat.column(c).name)) * (1.0 + table_hit);
    // "actors" alone usually means the table's first text column.
    if (r == 0 && table_hit > 0 && c == display_column(cat, cat.table_of(c))) r = 0.5 * table_hit;
    if (cues.any(kTemporalCues)) {
      for (const auto& t : name_tokens(cat.column(c).name)) {
        if (t == "year" || t == "date" || t == "yr") r += 0.5;
      }
    }
    if (literal_bonus && ctx.index) {
      for (const auto& lit : ctx.literals) {
        if (lit.is_text() && ctx.index->contains(lit.text(), c)) {
          r += config_.w_lit;
          break;
        }
      }
    }
    return r;
  }

  std::size_t mention(const GuidanceContext& ctx, const Cues& cues, ColumnId c) const {
    if (c == kStar) return cues.first(kCountCues);
    const SchemaCatalog& cat = *ctx.catalog;
    std::size_t best = std::string::npos;
    for (const auto& t : name_tokens(cat.column(c).name)) best = std::min(best, cues.find(t));
    return best;
  }

  double column_set(const GuidanceContext& ctx, const Cues& cues,
                    const std::vector<ColumnId>& cols, Slot slot) const {
    bool ordered = slot == Slot::kSelect;
    double sum = 0;
    int irrelevant = 0;
    for (ColumnId c : cols) {
      double r = relevance(ctx, cues, c, slot == Slot::kWhere);
      if (r <= 0) ++irrelevant;
      sum += r;
    }
    double w = sum * std::pow(0.1, irrelevant);
    if ((slot == Slot::kOrderBy || slot == Slot::kGroupBy) && !cols.empty()) {
      // Prefer the single best key; extra keys need their own evidence.
      w = w / static_cast<double>(cols.size()) * std::pow(0.3, static_cast<double>(cols.size() - 1));
    }
    if (ordered) {
      int inversions = 0;
      for (std::size_t i = 0; i < cols.size(); ++i) {
        for (std::size_t j = i + 1; j < cols.size(); ++j) {
          std::size_t a = mention(ctx, cues, cols[i]), b = mention(ctx, cues, cols[j]);
          if (a != std::string::npos && b != std::string::npos && a > b) ++inversions;
        }
      }
      w *= std::pow(0.5, inversions);
    }
    return w;
  }

  // An aggregate cue counts when it shortly precedes a mention of the
  // column, or anywhere when the column is not mentioned at all.
  double agg_weight(const GuidanceContext& ctx, const Cues& cues, Agg a, ColumnId column) const {
    std::initializer_list<std::string_view> list;
    switch (a) {
      case Agg::kNone: return 1.0;
      case Agg::kCount: list = kCountCues; break;
      case Agg::kMax: list = kMaxCues; break;
      case Agg::kMin: list = kMinCues; break;
      case Agg::kAvg: list = kAvgCues; break;
      case Agg::kSum: list = kSumCues; break;
    }
    std::vector<std::size_t> mentions;
    if (column != kStar) {
      for (const auto& t : name_tokens(ctx.catalog->column(column).name)) {
        auto at = cues.all(t);
        mentions.insert(mentions.end(), at.begin(), at.end());
      }
    }
    for (auto phrase : list) {
      auto len = name_tokens(phrase).size();
      for (std::size_t p : cues.all(phrase)) {
        if (mentions.empty()) return config_.w_agg;
        for (std::size_t m : mentions) {
          if (m >= p + len && m <= p + len + 3) return config_.w_agg;
        }
      }
    }
    return 0.0;
  }

  double op_weight(const Cues& cues, CmpOp op) const {
    if (op == CmpOp::kEq) return 1.0;
    return cues.any(op_cues(op)) ? config_.w_agg : 0.0;
  }

  double value_weight(const GuidanceContext& ctx, const Cues& cues, ColumnId column,
                      std::optional<CmpOp> op, const PredicateValue& v) const {
    double w = 1.0;
    if (v.lo.is_text() && ctx.index && column != kStar && ctx.index->contains(v.lo.text(), column)) {
      w += config_.w_lit;
    }
    if (op && *op != CmpOp::kEq) {
      auto lit = name_tokens(v.lo.str());
      std::size_t at = lit.empty() ? std::string::npos : cues.find(v.lo.str());
      if (at != std::string::npos) {
        for (auto phrase : op_cues(*op)) {
          std::size_t cue = cues.find(phrase);
          auto plen = name_tokens(phrase).size();
          if (cue != std::string::npos && cue + plen <= at && at <= cue + plen + 2) {
            w += config_.w_agg;
            break;
          }
        }
      }
    }
    return w;
  }

  double raw(const GuidanceContext& ctx, const Cues& cues, const PartialQuery& pq,
             const DecisionPoint& point, const Choice& c) const {
    switch (point.module) {
      case Module::kCol:
        return column_set(ctx, cues, std::get<std::vector<ColumnId>>(c), point.slot);
      case Module::kAgg: {
        if (point.slot == Slot::kHaving) {
          const auto& t = std::get<AggColumn>(c);
          if (t.column == kStar) return 1.0;
          return agg_weight(ctx, cues, *t.agg, t.column) *
                 (relevance(ctx, cues, t.column) > 0 ? 1.0 : 0.1);
        }
        const auto& items = point.slot == Slot::kOrderBy ? *pq.order_by : *pq.select;
        return agg_weight(ctx, cues, std::get<Agg>(c), items.at(point.index).column);
      }
      case Module::kKw: {
        const auto& set = std::get<ClauseSet>(c);
        double p_where = ctx.literals.empty() ? 0.1 : 0.9;
        double p_group = cues.any(kGroupCues) || cues.any(kHavingCues) ? 0.8 : 0.1;
        double p_order = cues.any(kOrderCues) ? 0.8 : 0.1;
        return (set.where ? p_where : 1 - p_where) * (set.group_by ? p_group : 1 - p_group) *
               (set.order_by ? p_order : 1 - p_order);
      }
      case Module::kOp:
        return op_weight(cues, std::get<CmpOp>(c));
      case Module::kAndOr:
        if (std::get<Connective>(c) == Connective::kAnd) return 1.0;
        return cues.any(kOrCues) ? 1.5 : 0.3;
      case Module::kValue: {
        if (point.slot == Slot::kHaving) {
          return value_weight(ctx, cues, kStar, pq.having.op, std::get<PredicateValue>(c));
        }
        const Predicate& p = pq.where->at(point.index);
        return value_weight(ctx, cues, p.column, p.op, std::get<PredicateValue>(c));
      }
      case Module::kHaving:
        if (!std::get<bool>(c)) return 1.0;
        return cues.any(kHavingCues) ? 1.0 : 0.2;
      case Module::kDescAsc: {
        const auto& tail = std::get<OrderTail>(c);
        std::size_t asc = cues.first(kAscCues), desc = cues.first(kDescCues);
        double dir = 1.0;
        if (tail.direction == Direction::kAsc) {
          dir += 0.2;
          if (asc != std::string::npos && asc <= desc) dir += config_.w_agg;
        } else if (desc != std::string::npos && desc < asc) {
          dir += config_.w_agg;
        }
        // "from earliest to most recent" names both ends: a sort, not a top-k.
        bool superlative = cues.any(kSuperlativeCues) &&
                           !(asc != std::string::npos && desc != std::string::npos);
        double lim;
        if (tail.limit == 0) {
          lim = superlative ? 0.3 : 1.0;
        } else if (tail.limit == ctx.tsq_limit) {
          lim = 1.0;
        } else if (tail.limit == 1) {
          lim = superlative ? 1.5 : 0.2;
        } else {
          std::string n = std::to_string(tail.limit);
          std::size_t at = cues.find(n);
          std::size_t top = cues.first({"top", "first"});
          lim = (at != std::string::npos && top != std::string::npos && top < at && at <= top + 2)
                    ? config_.w_agg
                    : 0.2;
        }
        return dir * lim;
      }
      case Module::kJoin:
        break;
    }
    return 0.0;
  }

  LexicalConfig config_;
};

}  // namespace

std::unique_ptr<GuidanceModel> uniform_model() { return std::make_unique<UniformModel>(); }

std::unique_ptr<GuidanceModel> lexical_model(const LexicalConfig& config) {
  return std::make_unique<LexicalModel>(config);
}

}  // namespace dualsql
