// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dualsql/catalog.hpp"
#include "dualsql/query.hpp"

namespace dualsql {

// Size limits of the enumerable query family.
struct ScopeBound {
  int max_select = 3;
  int max_where = 3;
  int max_group = 2;
  int max_order = 2;
  bool allow_having = true;
  std::size_t max_join_edges = 4;
};

struct GuidanceContext {
  const SchemaCatalog* catalog = nullptr;
  const ValueIndex* index = nullptr;  // optional
  std::string nlq;
  std::vector<Literal> literals;
  ScopeBound bound;
  int max_set_size = 3;
  int tsq_limit = 0;  // k of the table sketch, offered as a LIMIT candidate
};

struct ScoredChoice {
  Choice choice;
  double score = 0;
  std::string label;
};

class GuidanceModel {
 public:
  virtual ~GuidanceModel() = default;
  virtual std::string_view name() const = 0;
  // One strictly positive weight per choice; score_choices normalizes.
  virtual std::vector<double> weights(const GuidanceContext& ctx, const PartialQuery& pq,
                                      const DecisionPoint& point,
                                      const std::vector<Choice>& choices) const = 0;
};

struct LexicalConfig {
  double w_lit = 2.0;
  double w_agg = 2.0;
  double epsilon = 0.01;
};

std::unique_ptr<GuidanceModel> uniform_model();
std::unique_ptr<GuidanceModel> lexical_model(const LexicalConfig& config = {});

// Every legal output class for `point`, in a fixed order. Type-illegal
// classes are excluded.
std::vector<Choice> legal_choices(const GuidanceContext& ctx, const PartialQuery& pq,
                                  const DecisionPoint& point);

// Normalized scores (sum 1) sorted by score descending, then by label.
std::vector<ScoredChoice> score_choices(const GuidanceModel& model, const GuidanceContext& ctx,
                                        const PartialQuery& pq, const DecisionPoint& point);

// Lowercased alphanumeric tokens with a trailing plural 's' removed.
std::vector<std::string> tokenize_nlq(std::string_view text);

// Operators permitted on a column of the given type.
std::vector<CmpOp> operators_for(SemanticType type);
// Aggregates permitted on a column (kStar: COUNT only).
std::vector<Agg> aggregates_for(const SchemaCatalog& catalog, ColumnId column);

}  // namespace dualsql
