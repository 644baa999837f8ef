// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/database.hpp"

#include <sqlite3.h>

#include <utility>

#include "dualsql/error.hpp"

namespace dualsql {

namespace {

struct Deadline {
  std::chrono::steady_clock::time_point at;
  bool expired = false;
};

int progress_check(void* arg) {
  auto* deadline = static_cast<Deadline*>(arg);
  if (std::chrono::steady_clock::now() >= deadline->at) {
    deadline->expired = true;
    return 1;
  }
  return 0;
}

std::string errmsg(sqlite3* db) { return db ? sqlite3_errmsg(db) : "out of memory"; }

}  // namespace

Database::Database(sqlite3* db, std::filesystem::path path)
    : db_(db), path_(std::move(path)) {}

Database::Database(Database&& other) noexcept
    : db_(std::exchange(other.db_, nullptr)),
      path_(std::move(other.path_)),
      timeout_(other.timeout_) {}

Database& Database::operator=(Database&& other) noexcept {
  if (this != &other) {
    if (db_) sqlite3_close(db_);
    db_ = std::exchange(other.db_, nullptr);
    path_ = std::move(other.path_);
    timeout_ = other.timeout_;
  }
  return *this;
}

Database::~Database() {
  if (db_) sqlite3_close(db_);
}

Database Database::open_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw CatalogError("database file not found: " + path.string());
  }
  sqlite3* db = nullptr;
  int rc = sqlite3_open_v2(path.c_str(), &db, SQLITE_OPEN_READONLY | SQLITE_OPEN_NOMUTEX,
                           nullptr);
  if (rc != SQLITE_OK) {
    std::string msg = errmsg(db);
    sqlite3_close(db);
    throw CatalogError("cannot open " + path.string() + ": " + msg);
  }
  return Database(db, path);
}

Database Database::open_memory() {
  sqlite3* db = nullptr;
  if (sqlite3_open_v2(":memory:", &db, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_NOMUTEX,
                      nullptr) != SQLITE_OK) {
    std::string msg = errmsg(db);
    sqlite3_close(db);
    throw EngineError("cannot open in-memory database: " + msg);
  }
  return Database(db, {});
}

Database Database::clone() const {
  if (!path_.empty()) {
    Database copy = open_file(path_);
    copy.timeout_ = timeout_;
    return copy;
  }
  sqlite3_int64 size = 0;
  unsigned char* bytes = sqlite3_serialize(db_, "main", &size, 0);
  if (!bytes) throw EngineError("cannot serialize database: " + errmsg(db_));
  Database copy = open_memory();
  int rc = sqlite3_deserialize(copy.db_, "main", bytes, size, size,
                               SQLITE_DESERIALIZE_FREEONCLOSE | SQLITE_DESERIALIZE_RESIZEABLE);
  if (rc != SQLITE_OK) throw EngineError("cannot clone database: " + errmsg(copy.db_));
  copy.timeout_ = timeout_;
  return copy;
}

template <typename RowFn>
void Database::run(const std::string& sql, RowFn&& on_row, std::vector<std::string>* columns) {
  sqlite3_stmt* stmt = nullptr;
  if (sqlite3_prepare_v2(db_, sql.c_str(), static_cast<int>(sql.size()), &stmt, nullptr) !=
      SQLITE_OK) {
    throw EngineError("prepare failed: " + errmsg(db_) + " [" + sql + "]");
  }
  std::unique_ptr<sqlite3_stmt, decltype(&sqlite3_finalize)> guard(stmt, &sqlite3_finalize);

  Deadline deadline{std::chrono::steady_clock::now() + timeout_};
  if (timeout_.count() > 0) sqlite3_progress_handler(db_, 1000, &progress_check, &deadline);
  struct ResetHandler {
    sqlite3* db;
    bool active;
    ~ResetHandler() {
      if (active) sqlite3_progress_handler(db, 0, nullptr, nullptr);
    }
  } reset{db_, timeout_.count() > 0};

  const int ncols = sqlite3_column_count(stmt);
  if (columns) {
    columns->clear();
    for (int i = 0; i < ncols; ++i) columns->emplace_back(sqlite3_column_name(stmt, i));
  }
  while (true) {
    int rc = sqlite3_step(stmt);
    if (rc == SQLITE_DONE) break;
    if (rc != SQLITE_ROW) {
      if (deadline.expired) throw EngineError("statement timed out [" + sql + "]");
      throw EngineError("execution failed: " + errmsg(db_) + " [" + sql + "]");
    }
    Row row;
    row.reserve(ncols);
    for (int i = 0; i < ncols; ++i) {
      switch (sqlite3_column_type(stmt, i)) {
        case SQLITE_NULL:
          row.emplace_back();
          break;
        case SQLITE_INTEGER:
          row.emplace_back(static_cast<double>(sqlite3_column_int64(stmt, i)));
          break;
        case SQLITE_FLOAT:
          row.emplace_back(sqlite3_column_double(stmt, i));
          break;
        default: {
          const auto* text = reinterpret_cast<const char*>(sqlite3_column_text(stmt, i));
          row.emplace_back(std::string(text ? text : ""));
        }
      }
    }
    if (!on_row(std::move(row))) break;
  }
}

void Database::execute(const std::string& sql) {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    throw EngineError("exec failed: " + msg);
  }
}

ResultSet Database::query(const std::string& sql) {
  ResultSet result;
  run(sql, [&](Row row) {
    result.rows.push_back(std::move(row));
    return true;
  }, &result.columns);
  return result;
}

bool Database::exists(const std::string& sql) {
  bool found = false;
  run(sql, [&](Row) {
    found = true;
    return false;
  }, nullptr);
  return found;
}

}  // namespace dualsql
