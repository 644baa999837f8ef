// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "dualsql/config.hpp"
#include "dualsql/error.hpp"

namespace dualsql {
namespace {

TEST(Config, DefaultsWhenEmpty) {
  EngineConfig c = parse_config("");
  EXPECT_EQ(c.enumeration.mode, Mode::kGpqe);
  EXPECT_EQ(c.enumeration.timeout, std::chrono::milliseconds(60000));
  EXPECT_EQ(c.max_tasks, 8u);
}

TEST(Config, ParsesSectionsAndKeys) {
  EngineConfig c = parse_config(R"(
# comment
mode = nopq
timeout = 2.5
max_candidates = 7

[guidance]
w_lit = 4
epsilon = 0.5

[bound]
max_select = 2
allow_having = false
)");
  EXPECT_EQ(c.enumeration.mode, Mode::kNoPq);
  EXPECT_EQ(c.enumeration.timeout, std::chrono::milliseconds(2500));
  EXPECT_EQ(c.enumeration.max_candidates, 7u);
  EXPECT_DOUBLE_EQ(c.lexical.w_lit, 4);
  EXPECT_DOUBLE_EQ(c.lexical.epsilon, 0.5);
  EXPECT_EQ(c.enumeration.bound.max_select, 2);
  EXPECT_FALSE(c.enumeration.bound.allow_having);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("nonsense"), Error);
  EXPECT_THROW(parse_config("frobnicate = 1"), Error);
  EXPECT_THROW(parse_config("timeout = soon"), Error);
  EXPECT_THROW(parse_config("timeout = 0"), Error);
  EXPECT_THROW(parse_config("max_tasks = -1"), Error);
  EXPECT_THROW(parse_config("epsilon = 0"), Error);
  EXPECT_THROW(parse_config("allow_having = maybe"), Error);
}

TEST(Config, EdgeWeightsAtTopLevel) {
  EngineConfig c = parse_config("edge_weights.starring.aid = 2.0\n");
  ASSERT_EQ(c.edge_weights.count("starring.aid"), 1u);
  EXPECT_DOUBLE_EQ(c.edge_weights.at("starring.aid"), 2.0);
  EXPECT_THROW(parse_config("edge_weights.starring.aid = -1\n"), Error);
}

}  // namespace
}  // namespace dualsql
