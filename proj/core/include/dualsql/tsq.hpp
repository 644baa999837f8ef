// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualsql/database.hpp"
#include "dualsql/value.hpp"

namespace dualsql {

struct ExampleCell {
  enum class Kind { kEmpty, kExact, kRange };

  Kind kind = Kind::kEmpty;
  Value value;  // kExact
  double lo = 0;
  double hi = 0;

  static ExampleCell empty() { return {}; }
  static ExampleCell exact(Value v) { return {Kind::kExact, std::move(v), 0, 0}; }
  static ExampleCell range(double lo, double hi) { return {Kind::kRange, Value(), lo, hi}; }

  bool operator==(const ExampleCell&) const = default;
};

using ExampleTuple = std::vector<ExampleCell>;

// (types, tuples, sorted, limit). Empty `types` or `tuples` means the
// component is absent.
struct TableSketchQuery {
  std::vector<SemanticType> types;
  std::vector<ExampleTuple> tuples;
  bool sorted = false;
  int limit = 0;

  bool operator==(const TableSketchQuery&) const = default;
  std::size_t arity() const;
};

// Throws TsqError on malformed input, arity mismatch or a range cell in a
// text column.
TableSketchQuery parse_tsq(std::string_view json_text);
std::string tsq_to_json(const TableSketchQuery& tsq);

bool cell_matches(const ExampleCell& cell, const Value& value);
bool tuple_matches(const ExampleTuple& tuple, const Row& row);

struct ResultMeta {
  bool has_order_by = false;
  std::vector<SemanticType> projected_types;
};

bool satisfies(const TableSketchQuery& tsq, const std::vector<Row>& rows, const ResultMeta& meta);

// Injective assignment of tuples to rows; when `ordered`, row positions must
// increase in tuple order.
bool match_tuples(const std::vector<ExampleTuple>& tuples, const std::vector<Row>& rows,
                  bool ordered);

}  // namespace dualsql
