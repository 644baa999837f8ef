// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <variant>

namespace dualsql {

enum class SemanticType { kText, kNumber };

std::string_view to_string(SemanticType type);
SemanticType semantic_type_from_string(std::string_view name);

// A database cell or a literal constant. Numbers are kept as doubles; all
// fixtures and probes stay well inside the exactly representable range.
class Value {
 public:
  Value() = default;
  explicit Value(double number) : data_(number) {}
  explicit Value(std::string text) : data_(std::move(text)) {}
  explicit Value(const char* text) : data_(std::string(text)) {}

  static Value null() { return Value(); }

  bool is_null() const { return std::holds_alternative<std::monostate>(data_); }
  bool is_number() const { return std::holds_alternative<double>(data_); }
  bool is_text() const { return std::holds_alternative<std::string>(data_); }

  double number() const { return std::get<double>(data_); }
  const std::string& text() const { return std::get<std::string>(data_); }

  // Type of a non-null value.
  SemanticType type() const {
    return is_number() ? SemanticType::kNumber : SemanticType::kText;
  }

  // SQL literal: 'text' with quotes doubled, or a shortest round-trip number.
  std::string sql_literal() const;
  // Human-readable form without quoting.
  std::string str() const;

  bool operator==(const Value&) const = default;
  std::partial_ordering operator<=>(const Value& other) const;

 private:
  std::variant<std::monostate, double, std::string> data_;
};

std::string format_number(double number);

// A tagged literal value from the natural-language query.
using Literal = Value;

}  // namespace dualsql
