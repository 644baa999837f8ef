// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "dualsql/catalog.hpp"
#include "dualsql/database.hpp"
#include "dualsql/guidance.hpp"
#include "dualsql/joinpath.hpp"
#include "dualsql/query.hpp"
#include "dualsql/tsq.hpp"
#include "dualsql/verifier.hpp"

namespace dualsql {

enum class Mode { kGpqe, kNoGuide, kNoPq };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

struct SearchState {
  PartialQuery pq;
  double confidence = 1.0;
  DecisionTrace trace;
  std::size_t join_len = 0;
};

struct Candidate {
  std::size_t rank = 0;
  std::string sql;
  double confidence = 0;
  SearchState state;
  std::size_t probes_at_emit = 0;  // task probes executed when emitted
};

// Called once per expansion with the parent and every generated child
// (before verification). `join_fanout` marks join-path replication.
using ExpansionObserver =
    std::function<void(const SearchState& parent, const std::vector<SearchState>& children,
                       bool join_fanout)>;

struct EnumConfig {
  Mode mode = Mode::kGpqe;
  std::chrono::milliseconds timeout{60000};
  std::size_t max_candidates = 100;  // 0 = unbounded
  std::size_t max_expansions = 0;    // 0 = unbounded
  int max_set_size = 3;
  int join_expand_depth = 1;
  std::size_t max_join_paths = 64;
  std::uint64_t seed = 42;
  ScopeBound bound;
  std::stop_token stop;
  ExpansionObserver observer;
};

enum class Termination { kExhausted, kTimeout, kMaxCandidates, kMaxExpansions, kStopped, kError };

std::string_view to_string(Termination t);

struct EnumReport {
  Termination termination = Termination::kExhausted;
  std::size_t candidates = 0;
  std::size_t expansions = 0;
  std::size_t generated = 0;
  std::size_t pruned = 0;
  std::size_t probes = 0;
  double seconds = 0;
  std::string error;  // set when termination == kError
  std::map<Stage, std::size_t> pruned_by_stage;
};

struct TaskInputs {
  std::string nlq;
  std::vector<Literal> literals;
  std::optional<TableSketchQuery> tsq;
};

using CandidateSink = std::function<void(const Candidate&)>;

// One synthesis task bound to a database. Not thread-safe; run separate
// instances (with cloned connections) for concurrent tasks.
class Enumerator {
 public:
  Enumerator(const SchemaCatalog& catalog, Database& db, const GuidanceModel& model,
             const ValueIndex* index = nullptr);

  GuidanceContext context(const TaskInputs& inputs, const EnumConfig& config) const;

  // Every successor of an incomplete state, unverified. The second member
  // is true when the successors are join-path variants.
  std::pair<std::vector<SearchState>, bool> children(const SearchState& state,
                                                     const GuidanceContext& ctx,
                                                     const EnumConfig& config) const;

  EnumReport run(const TaskInputs& inputs, const EnumConfig& config, const CandidateSink& emit);

  const SchemaGraph& graph() const { return graph_; }

 private:
  const SchemaCatalog& catalog_;
  Database& db_;
  const GuidanceModel& model_;
  const ValueIndex* index_;
  SchemaGraph graph_;
};

// Decision sequence that the schedule would follow to build `gold`, with
// join-path choices taken from construct_join_paths. nullopt when the
// schedule cannot reach a query canonically equal to `gold`.
std::optional<DecisionTrace> derive_trace(const PartialQuery& gold, const SchemaCatalog& catalog,
                                          const JoinOptions& options = {},
                                          std::size_t max_join_edges = 4);

}  // namespace dualsql
