// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "dualsql/enumerator.hpp"
#include "dualsql/guidance.hpp"

namespace dualsql {

// Engine settings read from a key=value file. Blank lines and lines
// starting with '#' or ';' are ignored; `[section]` headers are accepted
// and prefix later keys with "section.".
struct EngineConfig {
  LexicalConfig lexical;
  EnumConfig enumeration;
  std::chrono::milliseconds probe_timeout{2000};
  std::size_t max_tasks = 8;
  // "table.column" of the FK side -> weight
  std::map<std::string, double> edge_weights;
};

EngineConfig parse_config(std::string_view text);
EngineConfig load_config(const std::filesystem::path& path);

}  // namespace dualsql
