// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "dualsql/value.hpp"

struct sqlite3;

namespace dualsql {

using Row = std::vector<Value>;

struct ResultSet {
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

// RAII handle over an embedded SQLite connection. Not thread-safe; use
// clone() to give each worker its own connection.
class Database {
 public:
  static Database open_file(const std::filesystem::path& path);
  static Database open_memory();

  Database(Database&&) noexcept;
  Database& operator=(Database&&) noexcept;
  ~Database();

  // Independent connection over identical contents.
  Database clone() const;

  void execute(const std::string& sql);
  ResultSet query(const std::string& sql);
  // True iff `sql` yields at least one row.
  bool exists(const std::string& sql);

  // Statements running longer than this throw EngineError. Zero disables.
  void set_timeout(std::chrono::milliseconds timeout) { timeout_ = timeout; }
  std::chrono::milliseconds timeout() const { return timeout_; }

  sqlite3* handle() const { return db_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  explicit Database(sqlite3* db, std::filesystem::path path);

  template <typename RowFn>
  void run(const std::string& sql, RowFn&& on_row, std::vector<std::string>* columns);

  sqlite3* db_ = nullptr;
  std::filesystem::path path_;
  std::chrono::milliseconds timeout_{0};
};

}  // namespace dualsql
