// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/value.hpp"

#include <charconv>
#include <cmath>

#include "dualsql/error.hpp"

namespace dualsql {

std::string_view to_string(SemanticType type) {
  return type == SemanticType::kText ? "text" : "number";
}

SemanticType semantic_type_from_string(std::string_view name) {
  if (name == "text") return SemanticType::kText;
  if (name == "number") return SemanticType::kNumber;
  throw Error("unknown semantic type '" + std::string(name) + "'");
}

std::string format_number(double number) {
  if (std::isfinite(number) && number == std::trunc(number) &&
      std::fabs(number) < 9.0e15) {
    return std::to_string(static_cast<long long>(number));
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), number);
  return std::string(buf, end);
}

std::string Value::sql_literal() const {
  if (is_null()) return "NULL";
  if (is_number()) return format_number(number());
  std::string out = "'";
  for (char c : text()) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

std::string Value::str() const {
  if (is_null()) return "NULL";
  if (is_number()) return format_number(number());
  return text();
}

// NULL < numbers < text, matching SQLite's cross-type ordering.
std::partial_ordering Value::operator<=>(const Value& other) const {
  if (data_.index() != other.data_.index()) {
    return data_.index() <=> other.data_.index();
  }
  if (is_null()) return std::partial_ordering::equivalent;
  if (is_number()) return number() <=> other.number();
  return text() <=> other.text();
}

}  // namespace dualsql
