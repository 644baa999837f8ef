// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dualsql/catalog.hpp"
#include "dualsql/database.hpp"
#include "dualsql/guidance.hpp"
#include "dualsql/query.hpp"
#include "dualsql/tsq.hpp"

namespace dualsql {

struct OracleBound {
  ScopeBound scope{2, 2, 1, 1, true, 2};
  int max_set_size = 3;
  int join_expand_depth = 1;
};

// "select=2,where=2,group=1,order=1,joins=2,having=1,set=3,depth=1"; keys
// may be omitted. Throws Error on unknown keys or malformed numbers.
OracleBound parse_bound(std::string_view spec);
std::string to_string(const OracleBound& bound);

struct OracleResult {
  std::vector<PartialQuery> queries;  // accepted, ordered by canonical key
  std::set<std::string> keys;         // canonical keys of `queries`
  std::size_t generated = 0;
  std::size_t executed = 0;
};

// Exhaustive generation of the bounded query family with a brute-force
// acceptance filter. Shares no search or pruning code with the enumerator.
OracleResult oracle_enumerate(const OracleBound& bound, const SchemaCatalog& catalog,
                              Database& db, const std::optional<TableSketchQuery>& tsq,
                              const std::vector<Literal>& literals);

// Acceptance of one complete query: clause presence matches (τ, k), no
// semantic rule fires, every literal is used, and the executed result
// satisfies the sketch.
bool oracle_accepts(const PartialQuery& q, const SchemaCatalog& catalog, Database& db,
                    const std::optional<TableSketchQuery>& tsq,
                    const std::vector<Literal>& literals);

}  // namespace dualsql
