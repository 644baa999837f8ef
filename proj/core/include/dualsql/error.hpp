// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dualsql {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Schema or database source could not be loaded.
class CatalogError : public Error {
 public:
  using Error::Error;
};

// SQL outside the supported SPJA subset (set ops, subqueries, mixed logic).
class ScopeError : public Error {
 public:
  using Error::Error;
};

class TsqError : public Error {
 public:
  using Error::Error;
};

// The database engine failed or a probe timed out. Never a verification
// failure.
class EngineError : public Error {
 public:
  using Error::Error;
};

class DecisionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dualsql
