// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "dualsql/catalog.hpp"
#include "dualsql/query.hpp"

namespace dualsql {

struct JoinOptions {
  int expand_depth = 1;
  std::size_t max_paths = 64;
};

double join_weight(const JoinPath& jp, const SchemaGraph& graph);

// Every minimum-weight tree spanning `terminals`, ordered lexicographically
// by edge list. Empty when the terminals are disconnected.
std::vector<JoinPath> steiner_trees(const std::vector<TableId>& terminals,
                                    const SchemaGraph& graph);

// The first of steiner_trees(). Throws Error on disconnected terminals.
JoinPath steiner(const std::vector<TableId>& terminals, const SchemaGraph& graph);

// Paths adding one FK-PK edge towards a table outside `jp`, repeated up to
// `depth` levels. Does not include `jp` itself.
std::vector<JoinPath> expand_one_hop(const JoinPath& jp, const SchemaGraph& graph, int depth = 1);

// Candidate join paths for a referenced table set, sorted by table count
// and then lexicographically. No tables yields one single-table path per
// table; disconnected tables yield an empty list.
std::vector<JoinPath> construct_join_paths(const std::vector<TableId>& tables,
                                           const SchemaGraph& graph,
                                           const JoinOptions& options = {});
std::vector<JoinPath> construct_join_paths(const PartialQuery& pq, const SchemaGraph& graph,
                                           const JoinOptions& options = {});

// True iff `jp` is a tree over exactly its tables using graph edges.
bool is_tree(const JoinPath& jp, const SchemaGraph& graph);

}  // namespace dualsql
