// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dualsql/error.hpp"

namespace dualsql {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw Error("config: " + key + " expects a number, got '" + v + "'");
  }
  return out;
}

long to_int(const std::string& key, const std::string& v) {
  long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || out < 0) {
    throw Error("config: " + key + " expects a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error("config: " + key + " expects a boolean, got '" + v + "'");
}

}  // namespace

EngineConfig parse_config(std::string_view text) {
  EngineConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[' && s.back() == ']') {
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(std::string_view(s).substr(0, eq));
    std::string value = trim(std::string_view(s).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!section.empty()) key = section + "." + key;

    auto& e = cfg.enumeration;
    if (key == "w_lit" || key == "guidance.w_lit") {
      cfg.lexical.w_lit = to_double(key, value);
    } else if (key == "w_agg" || key == "guidance.w_agg") {
      cfg.lexical.w_agg = to_double(key, value);
    } else if (key == "epsilon" || key == "guidance.epsilon") {
      cfg.lexical.epsilon = to_double(key, value);
      if (cfg.lexical.epsilon <= 0) throw Error("config: epsilon must be positive");
    } else if (key == "max_set_size") {
      e.max_set_size = static_cast<int>(to_int(key, value));
    } else if (key == "join_expand_depth") {
      e.join_expand_depth = static_cast<int>(to_int(key, value));
    } else if (key == "max_join_paths") {
      e.max_join_paths = to_int(key, value);
    } else if (key == "timeout" || key == "timeout_s") {
      double secs = to_double(key, value);
      if (secs <= 0) throw Error("config: timeout must be positive");
      e.timeout = std::chrono::milliseconds(static_cast<long>(secs * 1000));
    } else if (key == "probe_timeout" || key == "probe_timeout_s") {
      cfg.probe_timeout = std::chrono::milliseconds(static_cast<long>(to_double(key, value) * 1000));
    } else if (key == "max_candidates") {
      e.max_candidates = to_int(key, value);
    } else if (key == "max_expansions") {
      e.max_expansions = to_int(key, value);
    } else if (key == "max_tasks") {
      cfg.max_tasks = to_int(key, value);
    } else if (key == "max_select" || key == "bound.max_select") {
      e.bound.max_select = static_cast<int>(to_int(key, value));
    } else if (key == "max_where" || key == "bound.max_where") {
      e.bound.max_where = static_cast<int>(to_int(key, value));
    } else if (key == "max_group" || key == "bound.max_group") {
      e.bound.max_group = static_cast<int>(to_int(key, value));
    } else if (key == "max_order" || key == "bound.max_order") {
      e.bound.max_order = static_cast<int>(to_int(key, value));
    } else if (key == "allow_having" || key == "bound.allow_having") {
      e.bound.allow_having = to_bool(key, value);
    } else if (key == "max_join_edges" || key == "bound.max_join_edges") {
      e.bound.max_join_edges = to_int(key, value);
    } else if (key.starts_with("edge_weights.")) {
      double w = to_double(key, value);
      if (w <= 0) throw Error("config: edge weights must be positive");
      cfg.edge_weights[key.substr(13)] = w;
    } else if (key == "mode") {
      e.mode = mode_from_string(value);
    } else {
      throw Error("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace dualsql
