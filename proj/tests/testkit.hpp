// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dualsql/catalog.hpp"
#include "dualsql/query.hpp"
#include "dualsql/tsq.hpp"

namespace dualsql::testkit {

std::filesystem::path data_dir();
std::filesystem::path fixture_dir();
LoadedDatabase movies();
LoadedDatabase scholar();

// In-memory database built from a schema descriptor and INSERT statements.
LoadedDatabase build(std::string_view schema_json, const std::vector<std::string>& inserts);

// dept(did PK, dname, budget) <- emp(eid PK, ename, salary, did), small
// enough for exhaustive enumeration.
LoadedDatabase tiny_company();

inline constexpr std::string_view kMotivatingNlq =
    "Show names of movies starring actors from before 1995, and those after 2000, with "
    "corresponding actor names, and years, from earliest to most recent.";

std::vector<Literal> motivating_literals();
// Sketch with exact/empty/range cells over (movie, actor, year).
TableSketchQuery motivating_sketch(bool sorted = false);

// Strips table qualifiers, alias declarations, AS and redundant whitespace
// and lowercases keywords so SQL written with different alias conventions
// compares equal.
std::string normalize_sql(std::string_view sql);

}  // namespace dualsql::testkit
