// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/tsq.hpp"

#include <functional>

#include <json.hpp>

#include "dualsql/error.hpp"

namespace dualsql {

using nlohmann::json;

std::size_t TableSketchQuery::arity() const {
  if (!types.empty()) return types.size();
  if (!tuples.empty()) return tuples.front().size();
  return 0;
}

namespace {

ExampleCell parse_cell(const json& j) {
  if (j.is_null()) return ExampleCell::empty();
  if (!j.is_object() || j.size() != 1) throw TsqError("cell must be null or a one-key object");
  if (j.contains("exact")) {
    const json& v = j.at("exact");
    if (v.is_string()) {
      if (v.get<std::string>().empty()) throw TsqError("exact cell must be nonempty");
      return ExampleCell::exact(Value(v.get<std::string>()));
    }
    if (v.is_number()) return ExampleCell::exact(Value(v.get<double>()));
    throw TsqError("exact cell must hold a string or number");
  }
  if (j.contains("range")) {
    const json& r = j.at("range");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
      throw TsqError("range cell must be [low, high]");
    }
    double lo = r[0].get<double>(), hi = r[1].get<double>();
    if (lo > hi) throw TsqError("range cell has low > high");
    return ExampleCell::range(lo, hi);
  }
  throw TsqError("unknown cell kind");
}

}  // namespace

TableSketchQuery parse_tsq(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw TsqError(std::string("malformed TSQ: ") + e.what());
  }
  if (!doc.is_object()) throw TsqError("TSQ must be an object");
  TableSketchQuery tsq;
  try {
    if (doc.contains("types") && !doc.at("types").is_null()) {
      for (const auto& t : doc.at("types")) {
        tsq.types.push_back(semantic_type_from_string(t.get<std::string>()));
      }
    }
    if (doc.contains("tuples") && !doc.at("tuples").is_null()) {
      for (const auto& row : doc.at("tuples")) {
        if (!row.is_array()) throw TsqError("tuple must be an array");
        ExampleTuple tuple;
        for (const auto& cell : row) tuple.push_back(parse_cell(cell));
        tsq.tuples.push_back(std::move(tuple));
      }
    }
    if (doc.contains("sorted")) tsq.sorted = doc.at("sorted").get<bool>();
    if (doc.contains("limit")) {
      int k = doc.at("limit").get<int>();
      if (k < 0) throw TsqError("limit must be >= 0");
      tsq.limit = k;
    }
  } catch (const json::exception& e) {
    throw TsqError(std::string("malformed TSQ: ") + e.what());
  } catch (const TsqError&) {
    throw;
  } catch (const Error& e) {
    throw TsqError(e.what());
  }
  std::size_t arity = tsq.arity();
  for (const auto& tuple : tsq.tuples) {
    if (tuple.size() != arity) throw TsqError("tuple arity does not match");
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      const ExampleCell& c = tuple[i];
      if (c.kind == ExampleCell::Kind::kRange && !tsq.types.empty() &&
          tsq.types[i] != SemanticType::kNumber) {
        throw TsqError("range cell in a text column");
      }
      if (c.kind == ExampleCell::Kind::kExact && !tsq.types.empty() &&
          c.value.type() != tsq.types[i]) {
        throw TsqError("exact cell type does not match its column");
      }
    }
  }
  return tsq;
}

std::string tsq_to_json(const TableSketchQuery& tsq) {
  json doc;
  doc["types"] = json::array();
  for (SemanticType t : tsq.types) doc["types"].push_back(std::string(to_string(t)));
  doc["tuples"] = json::array();
  for (const auto& tuple : tsq.tuples) {
    json row = json::array();
    for (const auto& c : tuple) {
      switch (c.kind) {
        case ExampleCell::Kind::kEmpty:
          row.push_back(nullptr);
          break;
        case ExampleCell::Kind::kExact:
          if (c.value.is_number()) {
            row.push_back({{"exact", c.value.number()}});
          } else {
            row.push_back({{"exact", c.value.text()}});
          }
          break;
        case ExampleCell::Kind::kRange:
          row.push_back({{"range", {c.lo, c.hi}}});
          break;
      }
    }
    doc["tuples"].push_back(std::move(row));
  }
  doc["sorted"] = tsq.sorted;
  doc["limit"] = tsq.limit;
  return doc.dump();
}

bool cell_matches(const ExampleCell& cell, const Value& value) {
  if (value.is_null()) return false;
  switch (cell.kind) {
    case ExampleCell::Kind::kEmpty:
      return true;
    case ExampleCell::Kind::kExact:
      return cell.value == value;
    case ExampleCell::Kind::kRange:
      return value.is_number() && cell.lo <= value.number() && value.number() <= cell.hi;
  }
  return false;
}

bool tuple_matches(const ExampleTuple& tuple, const Row& row) {
  if (tuple.size() != row.size()) return false;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (!cell_matches(tuple[i], row[i])) return false;
  }
  return true;
}

bool match_tuples(const std::vector<ExampleTuple>& tuples, const std::vector<Row>& rows,
                  bool ordered) {
  if (tuples.size() > rows.size()) return false;
  if (ordered) {
    // Greedy leftmost subsequence matching is optimal for this shape.
    std::size_t pos = 0;
    for (const auto& t : tuples) {
      while (pos < rows.size() && !tuple_matches(t, rows[pos])) ++pos;
      if (pos == rows.size()) return false;
      ++pos;
    }
    return true;
  }
  std::vector<std::vector<std::size_t>> adj(tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (tuple_matches(tuples[i], rows[r])) adj[i].push_back(r);
    }
    if (adj[i].empty()) return false;
  }
  std::vector<int> owner(rows.size(), -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t i) {
    for (std::size_t r : adj[i]) {
      if (seen[r]) continue;
      seen[r] = 1;
      if (owner[r] < 0 || augment(static_cast<std::size_t>(owner[r]))) {
        owner[r] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    seen.assign(rows.size(), 0);
    if (!augment(i)) return false;
  }
  return true;
}

bool satisfies(const TableSketchQuery& tsq, const std::vector<Row>& rows, const ResultMeta& meta) {
  if (!tsq.types.empty() && meta.projected_types != tsq.types) return false;
  if (tsq.sorted && !meta.has_order_by) return false;
  if (tsq.limit > 0 && rows.size() > static_cast<std::size_t>(tsq.limit)) return false;
  if (!tsq.tuples.empty()) {
    bool ordered = tsq.sorted && tsq.tuples.size() >= 2;
    if (!match_tuples(tsq.tuples, rows, ordered)) return false;
  }
  return true;
}

}  // namespace dualsql
