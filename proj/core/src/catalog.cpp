// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dualsql/error.hpp"

namespace dualsql {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string quote_ident(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Storage declarations follow SQLite's affinity rules, except that date-like
// types are kept as text.
SemanticType map_storage_type(const std::string& table, const std::string& column,
                              const std::string& declared) {
  std::string t = upper(declared);
  if (t.find("DATE") != std::string::npos || t.find("TIME") != std::string::npos) {
    return SemanticType::kText;
  }
  if (t.find("INT") != std::string::npos) return SemanticType::kNumber;
  if (t.find("CHAR") != std::string::npos || t.find("CLOB") != std::string::npos ||
      t.find("TEXT") != std::string::npos) {
    return SemanticType::kText;
  }
  if (t.empty() || t.find("BLOB") != std::string::npos) {
    throw CatalogError("unsupported storage type '" + declared + "' for " + table + "." +
                       column);
  }
  if (t.find("REAL") != std::string::npos || t.find("FLOA") != std::string::npos ||
      t.find("DOUB") != std::string::npos || t.find("NUM") != std::string::npos ||
      t.find("DEC") != std::string::npos || t.find("BOOL") != std::string::npos) {
    return SemanticType::kNumber;
  }
  return SemanticType::kText;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        break;
      case '\n':
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
        break;
      default:
        field += c;
    }
  }
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoadedDatabase load_csv_directory(const std::filesystem::path& dir) {
  auto schema_path = dir / "schema.json";
  if (!std::filesystem::exists(schema_path)) {
    throw CatalogError("missing schema descriptor: " + schema_path.string());
  }
  SchemaCatalog catalog = parse_schema_descriptor(read_file(schema_path));
  Database db = Database::open_memory();
  db.execute("BEGIN");
  for (TableId t = 0; t < static_cast<TableId>(catalog.table_count()); ++t) {
    const TableDef& def = catalog.table(t);
    std::string ddl = "CREATE TABLE " + quote_ident(def.name) + " (";
    for (std::size_t i = 0; i < def.columns.size(); ++i) {
      if (i) ddl += ", ";
      ddl += quote_ident(def.columns[i].name);
      ddl += def.columns[i].type == SemanticType::kNumber ? " NUMERIC" : " TEXT";
    }
    db.execute(ddl + ")");

    auto csv_path = dir / (def.name + ".csv");
    if (!std::filesystem::exists(csv_path)) continue;
    std::ifstream in(csv_path, std::ios::binary);
    auto rows = read_csv(in);
    if (rows.empty()) continue;
    std::vector<int> slot;  // CSV position -> column index
    for (const auto& header : rows.front()) {
      auto col = std::find_if(def.columns.begin(), def.columns.end(),
                              [&](const ColumnDef& c) { return c.name == header; });
      if (col == def.columns.end()) {
        throw CatalogError(csv_path.string() + ": unknown column '" + header + "'");
      }
      slot.push_back(static_cast<int>(col - def.columns.begin()));
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& fields = rows[r];
      if (fields.size() == 1 && fields[0].empty()) continue;
      if (fields.size() != slot.size()) {
        throw CatalogError(csv_path.string() + ": row " + std::to_string(r + 1) +
                           " has wrong field count");
      }
      std::vector<Value> values(def.columns.size());
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string& f = fields[i];
        if (f.empty()) continue;
        const ColumnDef& col = def.columns[slot[i]];
        if (col.type == SemanticType::kNumber) {
          try {
            std::size_t used = 0;
            double d = std::stod(f, &used);
            if (used != f.size()) throw std::invalid_argument(f);
            values[slot[i]] = Value(d);
          } catch (const std::exception&) {
            throw CatalogError(csv_path.string() + ": non-numeric value '" + f + "' in " +
                               col.name);
          }
        } else {
          values[slot[i]] = Value(f);
        }
      }
      std::string sql = "INSERT INTO " + quote_ident(def.name) + " VALUES (";
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) sql += ", ";
        sql += values[i].sql_literal();
      }
      db.execute(sql + ")");
    }
  }
  db.execute("COMMIT");
  return {std::move(catalog), std::move(db)};
}

LoadedDatabase load_sqlite_file(const std::filesystem::path& file) {
  Database db = Database::open_file(file);
  auto names = db.query(
      "SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%' "
      "ORDER BY rowid");
  std::vector<TableDef> tables;
  std::vector<ForeignKeySpec> fks;
  for (const auto& row : names.rows) {
    TableDef def;
    def.name = row[0].text();
    auto info = db.query("PRAGMA table_info(" + quote_ident(def.name) + ")");
    std::vector<std::pair<int, std::string>> pk;
    for (const auto& col : info.rows) {
      // cid, name, type, notnull, dflt_value, pk
      std::string name = col[1].text();
      std::string type = col[2].is_text() ? col[2].text() : "";
      def.columns.push_back({name, map_storage_type(def.name, name, type)});
      if (col[5].is_number() && col[5].number() > 0) {
        pk.emplace_back(static_cast<int>(col[5].number()), name);
      }
    }
    std::sort(pk.begin(), pk.end());
    for (auto& [_, name] : pk) def.primary_key.push_back(name);

    auto fk_rows = db.query("PRAGMA foreign_key_list(" + quote_ident(def.name) + ")");
    for (const auto& fk : fk_rows.rows) {
      // id, seq, table, from, to, ...
      ForeignKeySpec spec;
      spec.from = {def.name, fk[3].text()};
      spec.to.first = fk[2].text();
      if (fk[4].is_text()) spec.to.second = fk[4].text();
      fks.push_back(std::move(spec));
    }
    tables.push_back(std::move(def));
  }
  // An FK without a target column references the target's single-column PK.
  for (auto& fk : fks) {
    if (!fk.to.second.empty()) continue;
    auto it = std::find_if(tables.begin(), tables.end(),
                           [&](const TableDef& t) { return t.name == fk.to.first; });
    if (it == tables.end() || it->primary_key.size() != 1) {
      throw CatalogError("undeclared FK target for " + fk.from.first + "." + fk.from.second);
    }
    fk.to.second = it->primary_key.front();
  }
  return {SchemaCatalog(std::move(tables), fks), std::move(db)};
}

}  // namespace

SchemaCatalog::SchemaCatalog(std::vector<TableDef> tables,
                             const std::vector<ForeignKeySpec>& foreign_keys)
    : tables_(std::move(tables)) {
  std::set<std::string> table_names;
  for (TableId t = 0; t < static_cast<TableId>(tables_.size()); ++t) {
    const TableDef& def = tables_[t];
    if (def.name.empty()) throw CatalogError("table with empty name");
    if (!table_names.insert(def.name).second) {
      throw CatalogError("duplicate table '" + def.name + "'");
    }
    std::set<std::string> column_names;
    std::vector<ColumnId> ids;
    for (const ColumnDef& col : def.columns) {
      if (!column_names.insert(col.name).second) {
        throw CatalogError("duplicate column '" + def.name + "." + col.name + "'");
      }
      ids.push_back(static_cast<ColumnId>(columns_.size()));
      columns_.push_back({t, col.name, col.type});
    }
    table_columns_.push_back(std::move(ids));
    std::vector<ColumnId> pk;
    for (const std::string& name : def.primary_key) {
      auto id = find_column(t, name);
      if (!id) throw CatalogError("primary key column '" + def.name + "." + name + "' not found");
      pk.push_back(*id);
    }
    primary_keys_.push_back(std::move(pk));
  }
  for (const ForeignKeySpec& fk : foreign_keys) {
    ColumnId from = column_id(fk.from.first, fk.from.second);
    ColumnId to = column_id(fk.to.first, fk.to.second);
    if (!is_primary_key(to)) {
      throw CatalogError("FK target " + fk.to.first + "." + fk.to.second +
                         " is not a declared primary key");
    }
    edges_.push_back({from, to, 1.0});
  }
}

std::optional<TableId> SchemaCatalog::find_table(std::string_view name) const {
  for (TableId t = 0; t < static_cast<TableId>(tables_.size()); ++t) {
    if (tables_[t].name == name) return t;
  }
  return std::nullopt;
}

std::optional<ColumnId> SchemaCatalog::find_column(TableId table, std::string_view name) const {
  for (ColumnId id : table_columns_.at(table)) {
    if (columns_[id].name == name) return id;
  }
  return std::nullopt;
}

ColumnId SchemaCatalog::column_id(std::string_view table, std::string_view column) const {
  auto t = find_table(table);
  if (!t) throw CatalogError("unknown table '" + std::string(table) + "'");
  auto c = find_column(*t, column);
  if (!c) {
    throw CatalogError("unknown column '" + std::string(table) + "." + std::string(column) + "'");
  }
  return *c;
}

bool SchemaCatalog::is_primary_key(ColumnId id) const {
  if (id < 0) return false;
  const auto& pk = primary_keys_.at(columns_.at(id).table);
  return std::find(pk.begin(), pk.end(), id) != pk.end();
}

std::string SchemaCatalog::qualified_name(ColumnId id) const {
  if (id == kStar) return "*";
  const ColumnInfo& c = columns_.at(id);
  return tables_[c.table].name + "." + c.name;
}

void SchemaCatalog::set_edge_weights(const std::map<std::string, double>& weights) {
  for (FkPkEdge& e : edges_) {
    auto it = weights.find(qualified_name(e.from));
    if (it == weights.end()) continue;
    if (!(it->second > 0)) throw CatalogError("edge weight must be positive: " + it->first);
    e.weight = it->second;
  }
}

SchemaCatalog parse_schema_descriptor(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw CatalogError(std::string("malformed schema descriptor: ") + e.what());
  }
  try {
    std::vector<TableDef> tables;
    for (const auto& t : doc.at("tables")) {
      TableDef def;
      def.name = t.at("name").get<std::string>();
      for (const auto& c : t.at("columns")) {
        std::string type = c.at("type").get<std::string>();
        if (type != "text" && type != "number") {
          throw CatalogError("unsupported column type '" + type + "' in " + def.name);
        }
        def.columns.push_back({c.at("name").get<std::string>(), semantic_type_from_string(type)});
      }
      if (t.contains("primary_key")) {
        def.primary_key = t.at("primary_key").get<std::vector<std::string>>();
      }
      tables.push_back(std::move(def));
    }
    std::vector<ForeignKeySpec> fks;
    if (doc.contains("foreign_keys")) {
      for (const auto& fk : doc.at("foreign_keys")) {
        auto from = fk.at("from").get<std::vector<std::string>>();
        auto to = fk.at("to").get<std::vector<std::string>>();
        if (from.size() != 2 || to.size() != 2) throw CatalogError("malformed foreign key");
        fks.push_back({{from[0], from[1]}, {to[0], to[1]}});
      }
    }
    return SchemaCatalog(std::move(tables), fks);
  } catch (const nlohmann::json::exception& e) {
    throw CatalogError(std::string("malformed schema descriptor: ") + e.what());
  }
}

LoadedDatabase load_catalog(const std::filesystem::path& source) {
  if (std::filesystem::is_directory(source)) return load_csv_directory(source);
  if (!std::filesystem::exists(source)) {
    throw CatalogError("database source not found: " + source.string());
  }
  return load_sqlite_file(source);
}

SchemaGraph::SchemaGraph(const SchemaCatalog& catalog)
    : catalog_(&catalog), adjacency_(catalog.table_count()) {
  const auto edges = catalog.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    TableId a = catalog.table_of(edges[i].from);
    TableId b = catalog.table_of(edges[i].to);
    edges_.push_back({i, a, b, edges[i].weight});
    adjacency_[a].push_back(i);
    if (b != a) adjacency_[b].push_back(i);
  }
}

SchemaGraph join_graph(const SchemaCatalog& catalog) { return SchemaGraph(catalog); }

void ValueIndex::add(const std::string& value, ColumnId column) {
  auto [it, inserted] = entries_.try_emplace(value);
  if (inserted) by_lower_.emplace(lower(value), value);
  auto& occ = it->second;
  if (std::find(occ.begin(), occ.end(), column) == occ.end()) {
    occ.insert(std::upper_bound(occ.begin(), occ.end(), column), column);
  }
}

const std::vector<ColumnId>* ValueIndex::lookup(const std::string& value) const {
  auto it = entries_.find(value);
  return it == entries_.end() ? nullptr : &it->second;
}

bool ValueIndex::contains(const std::string& value, ColumnId column) const {
  const auto* occ = lookup(value);
  return occ && std::binary_search(occ->begin(), occ->end(), column);
}

std::vector<ValueIndex::Entry> ValueIndex::autocomplete(std::string_view prefix,
                                                        std::size_t limit) const {
  std::string key = lower(prefix);
  std::vector<const std::string*> hits;
  for (auto it = by_lower_.lower_bound(key);
       it != by_lower_.end() && it->first.compare(0, key.size(), key) == 0; ++it) {
    hits.push_back(&it->second);
  }
  std::sort(hits.begin(), hits.end(), [](const std::string* a, const std::string* b) {
    if (a->size() != b->size()) return a->size() < b->size();
    return *a < *b;
  });
  if (hits.size() > limit) hits.resize(limit);
  std::vector<Entry> out;
  for (const std::string* v : hits) out.push_back({*v, entries_.at(*v)});
  return out;
}

ValueIndex build_value_index(const SchemaCatalog& catalog, Database& db) {
  ValueIndex index;
  for (ColumnId id = 0; id < static_cast<ColumnId>(catalog.column_count()); ++id) {
    const ColumnInfo& col = catalog.column(id);
    if (col.type != SemanticType::kText) continue;
    std::string sql = "SELECT DISTINCT " + quote_ident(col.name) + " FROM " +
                      quote_ident(catalog.table(col.table).name) + " WHERE " +
                      quote_ident(col.name) + " IS NOT NULL";
    auto rs = db.query(sql);
    for (const auto& row : rs.rows) index.add(row[0].str(), id);
  }
  return index;
}

}  // namespace dualsql
