// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "dualsql/error.hpp"
#include "dualsql/query.hpp"

namespace dualsql {

namespace {

enum class Tok { kIdent, kNumber, kString, kSymbol, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // identifiers upper-cased in `upper`
  std::string upper;
};

std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < sql.size()) {
    char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < sql.size() &&
             (std::isalnum(static_cast<unsigned char>(sql[j])) || sql[j] == '_')) {
        ++j;
      }
      Token t{Tok::kIdent, std::string(sql.substr(i, j - i)), {}};
      for (char ch : t.text) t.upper += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      out.push_back(std::move(t));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < sql.size() && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      std::size_t j = i;
      while (j < sql.size() && (std::isdigit(static_cast<unsigned char>(sql[j])) || sql[j] == '.')) ++j;
      out.push_back({Tok::kNumber, std::string(sql.substr(i, j - i)), {}});
      i = j;
    } else if (c == '\'' || c == '"' || c == '`') {
      const char close = c == '`' ? '\'' : c;
      std::string text;
      std::size_t j = i + 1;
      while (true) {
        if (j >= sql.size()) throw ScopeError("unterminated string literal");
        if (sql[j] == close) {
          if (j + 1 < sql.size() && sql[j + 1] == sql[j]) {
            text += sql[j];
            j += 2;
            continue;
          }
          break;
        }
        text += sql[j++];
      }
      out.push_back({Tok::kString, text, {}});
      i = j + 1;
    } else {
      static const char* two[] = {"!=", "<>", "<=", ">="};
      std::string sym(1, c);
      for (const char* t : two) {
        if (sql.substr(i, 2) == t) sym = t;
      }
      if (sym == "<>") {
        out.push_back({Tok::kSymbol, "!=", "!="});
        i += 2;
        continue;
      }
      if (std::string("(),.*=<>;-").find(c) == std::string::npos && sym.size() == 1) {
        throw ScopeError(std::string("unexpected character '") + c + "'");
      }
      out.push_back({Tok::kSymbol, sym, sym});
      i += sym.size();
    }
  }
  out.push_back({Tok::kEnd, "", ""});
  return out;
}

// Boolean condition tree before flattening.
struct Cond {
  enum Kind { kPred, kAnd, kOr } kind = kPred;
  Predicate pred;
  std::vector<Cond> kids;
};

class Parser {
 public:
  Parser(std::string_view sql, const SchemaCatalog& catalog)
      : toks_(tokenize(sql)), catalog_(catalog) {}

  PartialQuery parse() {
    for (const auto& t : toks_) {
      if (t.kind == Tok::kIdent &&
          (t.upper == "UNION" || t.upper == "INTERSECT" || t.upper == "EXCEPT")) {
        throw ScopeError("set operations are out of scope");
      }
    }
    expect_kw("SELECT");
    if (peek_kw("DISTINCT")) ++pos_;
    std::vector<RawItem> raw_select;
    do {
      raw_select.push_back(parse_item());
    } while (accept(","));

    expect_kw("FROM");
    parse_from();

    PartialQuery pq;
    std::vector<AggColumn> select;
    for (const auto& r : raw_select) select.push_back(resolve_item(r));
    pq.select = select;

    ClauseSet clauses;
    if (accept_kw("WHERE")) {
      clauses.where = true;
      Cond c = parse_or();
      flatten_where(c, pq);
    }
    if (accept_kw("GROUP")) {
      expect_kw("BY");
      clauses.group_by = true;
      std::vector<ColumnId> cols;
      do {
        cols.push_back(resolve_column(parse_colref()));
      } while (accept(","));
      std::sort(cols.begin(), cols.end());
      cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
      pq.group_by = cols;
      pq.has_having = false;
      if (accept_kw("HAVING")) {
        pq.has_having = true;
        AggColumn target = resolve_item(parse_item());
        if (target.agg == Agg::kNone) throw ScopeError("HAVING needs an aggregate");
        pq.having.target = target;
        CmpOp op = parse_op();
        if (op == CmpOp::kLike || op == CmpOp::kBetween) {
          throw ScopeError("unsupported HAVING operator");
        }
        pq.having.op = op;
        Value v = parse_literal();
        if (!v.is_number()) throw ScopeError("HAVING compares against a number");
        pq.having.value = v;
      }
    } else if (peek_kw("HAVING")) {
      throw ScopeError("HAVING without GROUP BY");
    }
    if (accept_kw("ORDER")) {
      expect_kw("BY");
      clauses.order_by = true;
      std::vector<AggColumn> items;
      std::optional<Direction> dir;
      do {
        items.push_back(resolve_item(parse_item()));
        Direction d = Direction::kAsc;
        if (accept_kw("DESC")) {
          d = Direction::kDesc;
        } else {
          accept_kw("ASC");
        }
        if (dir && *dir != d) throw ScopeError("mixed ORDER BY directions");
        dir = d;
      } while (accept(","));
      pq.order_by = items;
      pq.order_tail = OrderTail{*dir, 0};
    }
    if (accept_kw("LIMIT")) {
      if (!pq.order_tail) throw ScopeError("LIMIT without ORDER BY");
      const Token& t = next();
      if (t.kind != Tok::kNumber) throw ScopeError("LIMIT expects an integer");
      double n = std::stod(t.text);
      if (n != static_cast<int>(n) || n < 0) throw ScopeError("LIMIT expects an integer");
      pq.order_tail->limit = static_cast<int>(n);
    }
    accept(";");
    if (toks_[pos_].kind != Tok::kEnd) {
      throw ScopeError("unexpected token '" + toks_[pos_].text + "'");
    }
    pq.clauses = clauses;
    pq.join_path = join_path_;
    return pq;
  }

 private:
  struct ColRef {
    std::string qualifier;
    std::string name;
  };
  struct RawItem {
    Agg agg = Agg::kNone;
    bool star = false;
    ColRef col;
  };

  const Token& next() { return toks_[pos_++]; }
  bool peek_kw(const char* kw) const {
    return toks_[pos_].kind == Tok::kIdent && toks_[pos_].upper == kw;
  }
  bool accept_kw(const char* kw) {
    if (!peek_kw(kw)) return false;
    ++pos_;
    return true;
  }
  void expect_kw(const char* kw) {
    if (!accept_kw(kw)) throw ScopeError(std::string("expected ") + kw + " near '" + toks_[pos_].text + "'");
  }
  bool accept(const char* sym) {
    if (toks_[pos_].kind != Tok::kSymbol || toks_[pos_].text != sym) return false;
    ++pos_;
    return true;
  }
  void expect(const char* sym) {
    if (!accept(sym)) throw ScopeError(std::string("expected '") + sym + "' near '" + toks_[pos_].text + "'");
  }

  static bool is_reserved(const std::string& upper) {
    static const std::set<std::string> words = {
        "SELECT", "FROM", "WHERE", "GROUP", "BY", "HAVING", "ORDER", "LIMIT", "JOIN", "ON",
        "AS", "AND", "OR", "NOT", "ASC", "DESC", "INNER", "LEFT", "RIGHT", "OUTER", "BETWEEN",
        "LIKE", "IN", "IS", "DISTINCT"};
    return words.count(upper) > 0;
  }

  ColRef parse_colref() {
    const Token& t = next();
    if (t.kind != Tok::kIdent || is_reserved(t.upper)) {
      throw ScopeError("expected column near '" + t.text + "'");
    }
    if (accept(".")) {
      const Token& c = next();
      if (c.kind != Tok::kIdent) throw ScopeError("expected column name");
      return {t.text, c.text};
    }
    return {"", t.text};
  }

  RawItem parse_item() {
    static const std::map<std::string, Agg> aggs = {
        {"MAX", Agg::kMax}, {"MIN", Agg::kMin}, {"SUM", Agg::kSum},
        {"COUNT", Agg::kCount}, {"AVG", Agg::kAvg}};
    RawItem item;
    if (toks_[pos_].kind == Tok::kIdent && aggs.count(toks_[pos_].upper) &&
        toks_[pos_ + 1].text == "(") {
      item.agg = aggs.at(next().upper);
      expect("(");
      if (peek_kw("DISTINCT")) throw ScopeError("aggregate DISTINCT is out of scope");
      if (accept("*")) {
        if (item.agg != Agg::kCount) throw ScopeError("star only under COUNT");
        item.star = true;
      } else {
        item.col = parse_colref();
      }
      expect(")");
      return item;
    }
    if (accept("*")) throw ScopeError("bare star projection is out of scope");
    if (toks_[pos_].text == "(") throw ScopeError("expressions are out of scope");
    item.col = parse_colref();
    return item;
  }

  void parse_table() {
    const Token& t = next();
    if (t.kind == Tok::kSymbol && t.text == "(") throw ScopeError("nested subqueries are out of scope");
    auto id = catalog_.find_table(t.text);
    if (!id) throw ScopeError("unknown table '" + t.text + "'");
    if (std::find(tables_.begin(), tables_.end(), *id) != tables_.end()) {
      throw ScopeError("self-joins are out of scope");
    }
    tables_.push_back(*id);
    std::string alias = t.text;
    if (accept_kw("AS")) {
      alias = next().text;
    } else if (toks_[pos_].kind == Tok::kIdent && !is_reserved(toks_[pos_].upper)) {
      alias = next().text;
    }
    aliases_[alias] = *id;
    aliases_[t.text] = *id;
  }

  void parse_from() {
    parse_table();
    std::set<std::size_t> edges;
    while (true) {
      if (accept(",")) throw ScopeError("implicit joins are out of scope");
      if (peek_kw("LEFT") || peek_kw("RIGHT") || peek_kw("OUTER")) {
        throw ScopeError("outer joins are out of scope");
      }
      accept_kw("INNER");
      if (!accept_kw("JOIN")) break;
      parse_table();
      expect_kw("ON");
      do {
        ColumnId a = resolve_column(parse_colref());
        expect("=");
        ColumnId b = resolve_column(parse_colref());
        bool found = false;
        for (std::size_t e = 0; e < catalog_.edges().size(); ++e) {
          const FkPkEdge& edge = catalog_.edges()[e];
          if ((edge.from == a && edge.to == b) || (edge.from == b && edge.to == a)) {
            edges.insert(e);
            found = true;
          }
        }
        if (!found) throw ScopeError("join condition is not an FK-PK edge");
      } while (accept_kw("AND"));
    }
    JoinPath jp;
    jp.tables = tables_;
    std::sort(jp.tables.begin(), jp.tables.end());
    jp.edges.assign(edges.begin(), edges.end());
    if (jp.edges.size() + 1 != jp.tables.size()) throw ScopeError("join graph is not a tree");
    join_path_ = jp;
  }

  ColumnId resolve_column(const ColRef& ref) {
    if (!ref.qualifier.empty()) {
      auto it = aliases_.find(ref.qualifier);
      if (it == aliases_.end()) throw ScopeError("unknown table alias '" + ref.qualifier + "'");
      auto c = catalog_.find_column(it->second, ref.name);
      if (!c) throw ScopeError("unknown column '" + ref.qualifier + "." + ref.name + "'");
      return *c;
    }
    std::optional<ColumnId> found;
    for (TableId t : tables_) {
      if (auto c = catalog_.find_column(t, ref.name)) {
        if (found) throw ScopeError("ambiguous column '" + ref.name + "'");
        found = c;
      }
    }
    if (!found) throw ScopeError("unknown column '" + ref.name + "'");
    return *found;
  }

  AggColumn resolve_item(const RawItem& r) {
    if (r.star) return {kStar, Agg::kCount};
    return {resolve_column(r.col), r.agg};
  }

  CmpOp parse_op() {
    const Token& t = next();
    if (t.kind == Tok::kSymbol) {
      if (t.text == "=") return CmpOp::kEq;
      if (t.text == "!=") return CmpOp::kNe;
      if (t.text == ">") return CmpOp::kGt;
      if (t.text == "<") return CmpOp::kLt;
      if (t.text == ">=") return CmpOp::kGe;
      if (t.text == "<=") return CmpOp::kLe;
    } else if (t.kind == Tok::kIdent) {
      if (t.upper == "BETWEEN") return CmpOp::kBetween;
      if (t.upper == "LIKE") return CmpOp::kLike;
    }
    throw ScopeError("unsupported operator '" + t.text + "'");
  }

  Value parse_literal() {
    bool negative = accept("-");
    const Token& t = next();
    if (t.kind == Tok::kNumber) {
      double d = std::stod(t.text);
      return Value(negative ? -d : d);
    }
    if (t.kind == Tok::kString && !negative) return Value(t.text);
    if (t.kind == Tok::kSymbol && t.text == "(") throw ScopeError("nested subqueries are out of scope");
    throw ScopeError("expected literal near '" + t.text + "'");
  }

  Cond parse_or() {
    Cond first = parse_and();
    if (!peek_kw("OR")) return first;
    Cond c;
    c.kind = Cond::kOr;
    c.kids.push_back(std::move(first));
    while (accept_kw("OR")) c.kids.push_back(parse_and());
    return c;
  }

  Cond parse_and() {
    Cond first = parse_atom();
    if (!peek_kw("AND")) return first;
    Cond c;
    c.kind = Cond::kAnd;
    c.kids.push_back(std::move(first));
    while (accept_kw("AND")) c.kids.push_back(parse_atom());
    return c;
  }

  Cond parse_atom() {
    if (accept("(")) {
      if (peek_kw("SELECT")) throw ScopeError("nested subqueries are out of scope");
      Cond c = parse_or();
      expect(")");
      return c;
    }
    if (peek_kw("NOT")) throw ScopeError("NOT is out of scope");
    Cond c;
    c.pred.column = resolve_column(parse_colref());
    if (peek_kw("IN") || peek_kw("IS") || peek_kw("NOT")) {
      throw ScopeError("unsupported predicate form");
    }
    CmpOp op = parse_op();
    c.pred.op = op;
    PredicateValue v{parse_literal(), std::nullopt};
    if (op == CmpOp::kBetween) {
      expect_kw("AND");
      v.hi = parse_literal();
    } else if (op == CmpOp::kLike) {
      if (!v.lo.is_text()) throw ScopeError("LIKE expects a string pattern");
      const std::string& pat = v.lo.text();
      if (pat.size() < 2 || pat.front() != '%' || pat.back() != '%') {
        throw ScopeError("LIKE pattern must be of the form '%text%'");
      }
      v.lo = Value(pat.substr(1, pat.size() - 2));
    }
    c.pred.value = v;
    return c;
  }

  // Accepts a single AND group, a single OR list, or a leading AND group
  // followed by single-predicate disjuncts.
  void flatten_where(const Cond& c, PartialQuery& pq) {
    auto conj = [&](const Cond& x, std::vector<Predicate>& out) {
      if (x.kind == Cond::kPred) {
        out.push_back(x.pred);
        return;
      }
      if (x.kind == Cond::kOr) throw ScopeError("nested mixed logic is out of scope");
      for (const Cond& k : x.kids) {
        if (k.kind != Cond::kPred) throw ScopeError("nested mixed logic is out of scope");
        out.push_back(k.pred);
      }
    };
    std::vector<Predicate> preds;
    std::vector<std::optional<Connective>> conns;
    if (c.kind != Cond::kOr) {
      conj(c, preds);
      conns.assign(preds.size() - 1, Connective::kAnd);
    } else {
      for (std::size_t i = 0; i < c.kids.size(); ++i) {
        const Cond& k = c.kids[i];
        if (i > 0 && k.kind != Cond::kPred) throw ScopeError("nested mixed logic is out of scope");
        conj(k, preds);
        if (i == 0) {
          conns.assign(preds.size() - 1, Connective::kAnd);
        } else {
          conns.push_back(Connective::kOr);
        }
      }
    }
    pq.where = preds;
    pq.connectives = conns;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const SchemaCatalog& catalog_;
  std::vector<TableId> tables_;
  std::map<std::string, TableId> aliases_;
  JoinPath join_path_;
};

}  // namespace

PartialQuery parse_gold(std::string_view sql, const SchemaCatalog& catalog) {
  return Parser(sql, catalog).parse();
}

}  // namespace dualsql
