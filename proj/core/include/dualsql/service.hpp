// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "dualsql/catalog.hpp"
#include "dualsql/config.hpp"

namespace dualsql {

// HTTP facade over one database: task submission, incremental candidate
// polling, stop, result preview, value autocomplete and schema listing.
class Service {
 public:
  Service(LoadedDatabase source, EngineConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds and serves on a background thread. Port 0 picks a free port.
  // Returns the bound port; throws Error when binding fails.
  int start(const std::string& host, int port);
  // Blocks until stop() is called from elsewhere.
  void wait();
  // Stops the listener and all running tasks.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dualsql
