// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dualsql/database.hpp"
#include "dualsql/value.hpp"

namespace dualsql {

using TableId = int;
// Index into SchemaCatalog::columns(). kStar is the `*` pseudo-column.
using ColumnId = int;
inline constexpr ColumnId kStar = -1;

struct ColumnDef {
  std::string name;
  SemanticType type = SemanticType::kText;
};

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;
  std::vector<std::string> primary_key;
};

struct ColumnInfo {
  TableId table = 0;
  std::string name;
  SemanticType type = SemanticType::kText;
};

// Foreign key (from) referencing a primary key column (to).
struct FkPkEdge {
  ColumnId from = 0;
  ColumnId to = 0;
  double weight = 1.0;

  bool operator==(const FkPkEdge&) const = default;
};

// Named form of an FK edge, as written in a schema descriptor.
struct ForeignKeySpec {
  std::pair<std::string, std::string> from;
  std::pair<std::string, std::string> to;
};

class SchemaCatalog {
 public:
  SchemaCatalog() = default;
  // Throws CatalogError when any invariant is violated: duplicate names,
  // primary keys naming unknown columns, FK edges to undeclared targets.
  SchemaCatalog(std::vector<TableDef> tables, const std::vector<ForeignKeySpec>& foreign_keys);

  std::span<const TableDef> tables() const { return tables_; }
  std::span<const FkPkEdge> edges() const { return edges_; }
  std::span<const ColumnInfo> columns() const { return columns_; }

  std::size_t table_count() const { return tables_.size(); }
  std::size_t column_count() const { return columns_.size(); }

  const TableDef& table(TableId id) const { return tables_.at(id); }
  const ColumnInfo& column(ColumnId id) const { return columns_.at(id); }
  TableId table_of(ColumnId id) const { return columns_.at(id).table; }
  SemanticType type_of(ColumnId id) const { return columns_.at(id).type; }

  // Columns of a table, in declaration order.
  std::span<const ColumnId> columns_of(TableId table) const { return table_columns_.at(table); }

  std::optional<TableId> find_table(std::string_view name) const;
  std::optional<ColumnId> find_column(TableId table, std::string_view name) const;
  ColumnId column_id(std::string_view table, std::string_view column) const;

  bool is_primary_key(ColumnId id) const;
  std::span<const ColumnId> primary_key(TableId table) const { return primary_keys_.at(table); }

  // "table.column" (or "*").
  std::string qualified_name(ColumnId id) const;

  // Replace the weight of every edge whose "from_table.from_col" key is
  // listed; unknown keys are ignored.
  void set_edge_weights(const std::map<std::string, double>& weights);

 private:
  std::vector<TableDef> tables_;
  std::vector<ColumnInfo> columns_;
  std::vector<std::vector<ColumnId>> table_columns_;
  std::vector<std::vector<ColumnId>> primary_keys_;
  std::vector<FkPkEdge> edges_;
};

// Catalog plus an open connection over the loaded data.
struct LoadedDatabase {
  SchemaCatalog catalog;
  Database db;
};

// Accepts either a SQLite database file or a directory holding schema.json
// and one <table>.csv per table (a missing CSV loads as an empty table).
LoadedDatabase load_catalog(const std::filesystem::path& source);
SchemaCatalog parse_schema_descriptor(std::string_view json_text);

// Undirected multigraph: one node per table, one edge per FK-PK edge.
class SchemaGraph {
 public:
  struct Edge {
    std::size_t id = 0;  // index into catalog edges
    TableId a = 0;
    TableId b = 0;
    double weight = 1.0;
  };

  explicit SchemaGraph(const SchemaCatalog& catalog);

  std::size_t node_count() const { return adjacency_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  // Edge ids incident to a table.
  std::span<const std::size_t> incident(TableId table) const { return adjacency_.at(table); }
  const SchemaCatalog& catalog() const { return *catalog_; }

 private:
  const SchemaCatalog* catalog_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

SchemaGraph join_graph(const SchemaCatalog& catalog);

// Inverted index from text values to the columns that contain them.
class ValueIndex {
 public:
  struct Entry {
    std::string value;
    std::vector<ColumnId> occurrences;
  };

  void add(const std::string& value, ColumnId column);

  const std::vector<ColumnId>* lookup(const std::string& value) const;
  bool contains(const std::string& value, ColumnId column) const;
  std::size_t size() const { return entries_.size(); }

  // Case-insensitive prefix search ordered by (length, value).
  std::vector<Entry> autocomplete(std::string_view prefix, std::size_t limit) const;

 private:
  // Keyed by lowercased value, so prefix scans are a range.
  std::multimap<std::string, std::string> by_lower_;
  std::map<std::string, std::vector<ColumnId>> entries_;
};

ValueIndex build_value_index(const SchemaCatalog& catalog, Database& db);

}  // namespace dualsql
