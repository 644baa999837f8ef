// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/service.hpp"

#include <atomic>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "dualsql/enumerator.hpp"
#include "dualsql/error.hpp"
#include "dualsql/harness.hpp"
#include "dualsql/tsq.hpp"

namespace dualsql {

using json = nlohmann::json;

namespace {

json value_json(const Value& v) {
  if (v.is_null()) return nullptr;
  if (v.is_number()) return v.number();
  return v.text();
}

struct TaskRecord {
  std::mutex mu;
  std::vector<Candidate> candidates;
  std::string state = "running";
  std::string error;
  std::jthread thread;
  std::mutex join_mu;

  void halt() {
    std::lock_guard lock(join_mu);
    thread.request_stop();
    if (thread.joinable()) thread.join();
  }
};

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

}  // namespace

struct Service::Impl {
  SchemaCatalog catalog;
  Database db;  // guarded by db_mu; prototype for task connections
  std::mutex db_mu;
  ValueIndex index;
  EngineConfig config;
  std::unique_ptr<GuidanceModel> model;

  std::mutex tasks_mu;
  std::map<std::string, std::shared_ptr<TaskRecord>> tasks;
  std::size_t next_id = 1;

  httplib::Server server;
  std::thread listener;
  std::mutex run_mu;
  std::condition_variable run_cv;
  bool running = false;

  Impl(LoadedDatabase source, EngineConfig cfg)
      : catalog(std::move(source.catalog)), db(std::move(source.db)), config(std::move(cfg)) {
    catalog.set_edge_weights(config.edge_weights);
    db.set_timeout(config.probe_timeout);
    index = build_value_index(catalog, db);
    model = lexical_model(config.lexical);
    routes();
  }

  std::size_t running_tasks() {
    std::size_t n = 0;
    for (auto& [id, t] : tasks) {
      std::lock_guard lock(t->mu);
      if (t->state == "running") ++n;
    }
    return n;
  }

  std::shared_ptr<TaskRecord> find(const std::string& id) {
    std::lock_guard lock(tasks_mu);
    auto it = tasks.find(id);
    return it == tasks.end() ? nullptr : it->second;
  }

  void create(const httplib::Request& req, httplib::Response& res) {
    TaskInputs inputs;
    try {
      json body = json::parse(req.body);
      inputs.nlq = body.at("nlq").get<std::string>();
      if (body.contains("literals")) {
        for (const auto& l : body.at("literals")) {
          std::string type = l.at("type").get<std::string>();
          const json& v = l.at("value");
          std::string text = v.is_string() ? v.get<std::string>() : v.dump();
          inputs.literals.push_back(parse_literal(type + ":" + text));
        }
      }
      if (body.contains("tsq") && !body.at("tsq").is_null()) {
        inputs.tsq = parse_tsq(body.at("tsq").dump());
      }
    } catch (const std::exception& e) {
      return send_error(res, 400, std::string("malformed request: ") + e.what());
    }
    if (inputs.nlq.find_first_not_of(" \t\r\n") == std::string::npos) {
      return send_error(res, 400, "nlq must not be empty");
    }

    auto record = std::make_shared<TaskRecord>();
    std::string id;
    {
      std::lock_guard lock(tasks_mu);
      if (running_tasks() >= config.max_tasks) return send_error(res, 409, "task capacity exceeded");
      id = std::to_string(next_id++);
      tasks[id] = record;
    }
    Database conn = [&] {
      std::lock_guard lock(db_mu);
      return db.clone();
    }();
    record->thread = std::jthread([this, record, inputs = std::move(inputs),
                                   conn = std::move(conn)](std::stop_token stop) mutable {
      EnumConfig cfg = config.enumeration;
      cfg.stop = stop;
      std::string final_state;
      std::string error;
      try {
        Enumerator en(catalog, conn, *model, &index);
        auto report = en.run(inputs, cfg, [&](const Candidate& c) {
          std::lock_guard lock(record->mu);
          record->candidates.push_back(c);
        });
        switch (report.termination) {
          case Termination::kStopped: final_state = "stopped"; break;
          case Termination::kTimeout: final_state = "timeout"; break;
          case Termination::kError:
            final_state = "error";
            error = report.error;
            break;
          default: final_state = "done";
        }
      } catch (const std::exception& e) {
        final_state = "error";
        error = e.what();
      }
      std::lock_guard lock(record->mu);
      record->state = final_state;
      record->error = error;
    });
    send_json(res, 201, {{"task_id", id}});
  }

  void poll(const httplib::Request& req, httplib::Response& res) {
    auto task = find(req.matches[1]);
    if (!task) return send_error(res, 404, "unknown task");
    std::size_t after = 0;
    if (req.has_param("after")) {
      try {
        after = std::stoul(req.get_param_value("after"));
      } catch (const std::exception&) {
        return send_error(res, 400, "after must be a non-negative integer");
      }
    }
    json out{{"task_id", std::string(req.matches[1])}, {"candidates", json::array()}};
    std::lock_guard lock(task->mu);
    for (const auto& c : task->candidates) {
      if (c.rank <= after) continue;
      out["candidates"].push_back({{"rank", c.rank}, {"confidence", c.confidence}, {"sql", c.sql}});
    }
    out["state"] = task->state;
    if (!task->error.empty()) out["error"] = task->error;
    send_json(res, 200, out);
  }

  void stop_task(const httplib::Request& req, httplib::Response& res) {
    auto task = find(req.matches[1]);
    if (!task) return send_error(res, 404, "unknown task");
    task->halt();
    std::lock_guard lock(task->mu);
    send_json(res, 200, {{"task_id", std::string(req.matches[1])}, {"state", task->state}});
  }

  void preview(const httplib::Request& req, httplib::Response& res) {
    auto task = find(req.matches[1]);
    if (!task) return send_error(res, 404, "unknown task");
    std::size_t rank = std::stoul(req.matches[2]);
    std::string mode = req.has_param("mode") ? req.get_param_value("mode") : "preview";
    if (mode != "preview" && mode != "full") return send_error(res, 400, "mode must be preview or full");
    PartialQuery pq;
    {
      std::lock_guard lock(task->mu);
      if (rank == 0 || rank > task->candidates.size()) return send_error(res, 404, "unknown candidate");
      pq = task->candidates[rank - 1].state.pq;
    }
    std::string sql;
    if (mode == "full") {
      sql = render_sql(pq, catalog);
    } else if (pq.order_tail && pq.order_tail->limit > 0) {
      pq.order_tail->limit = std::min(pq.order_tail->limit, 20);
      sql = render_sql(pq, catalog);
    } else {
      sql = render_sql(pq, catalog) + " LIMIT 20";
    }
    try {
      std::lock_guard lock(db_mu);
      ResultSet rs = db.query(sql);
      json rows = json::array();
      for (const auto& row : rs.rows) {
        json r = json::array();
        for (const auto& v : row) r.push_back(value_json(v));
        rows.push_back(std::move(r));
      }
      send_json(res, 200, {{"sql", sql}, {"columns", rs.columns}, {"rows", rows}});
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  }

  void autocomplete(const httplib::Request& req, httplib::Response& res) {
    std::string q = req.has_param("q") ? req.get_param_value("q") : "";
    std::size_t limit = 10;
    if (req.has_param("limit")) {
      try {
        limit = std::stoul(req.get_param_value("limit"));
      } catch (const std::exception&) {
        return send_error(res, 400, "limit must be a positive integer");
      }
      if (limit == 0) return send_error(res, 400, "limit must be a positive integer");
    }
    json out = json::array();
    for (const auto& e : index.autocomplete(q, limit)) {
      json occ = json::array();
      for (ColumnId c : e.occurrences) {
        occ.push_back({{"table", catalog.table(catalog.table_of(c)).name},
                       {"column", catalog.column(c).name}});
      }
      out.push_back({{"value", e.value}, {"occurrences", occ}});
    }
    send_json(res, 200, out);
  }

  void schema(httplib::Response& res) {
    json tables = json::array();
    for (const auto& t : catalog.tables()) {
      json cols = json::array();
      for (const auto& c : t.columns) cols.push_back({{"name", c.name}, {"type", std::string(to_string(c.type))}});
      tables.push_back({{"name", t.name}, {"columns", cols}, {"primary_key", t.primary_key}});
    }
    json fks = json::array();
    for (const auto& e : catalog.edges()) {
      const auto& f = catalog.column(e.from);
      const auto& to = catalog.column(e.to);
      fks.push_back({{"from", {catalog.table(f.table).name, f.name}},
                     {"to", {catalog.table(to.table).name, to.name}},
                     {"weight", e.weight}});
    }
    send_json(res, 200, {{"tables", tables}, {"foreign_keys", fks}});
  }

  void routes() {
    server.Post("/api/tasks", [this](const auto& req, auto& res) { create(req, res); });
    server.Get(R"(/api/tasks/([^/]+)/candidates)", [this](const auto& req, auto& res) { poll(req, res); });
    server.Post(R"(/api/tasks/([^/]+)/stop)", [this](const auto& req, auto& res) { stop_task(req, res); });
    server.Get(R"(/api/tasks/([^/]+)/candidates/(\d+)/preview)",
               [this](const auto& req, auto& res) { preview(req, res); });
    server.Get("/api/autocomplete", [this](const auto& req, auto& res) { autocomplete(req, res); });
    server.Get("/api/schema", [this](const auto&, auto& res) { schema(res); });
    server.set_exception_handler([](const auto&, auto& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      } catch (...) {
        send_error(res, 500, "unknown error");
      }
    });
  }
};

Service::Service(LoadedDatabase source, EngineConfig config)
    : impl_(std::make_unique<Impl>(std::move(source), std::move(config))) {}

Service::~Service() { stop(); }

int Service::start(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : port;
  if (port != 0 && !impl_->server.bind_to_port(host, port)) bound = -1;
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  {
    std::lock_guard lock(impl_->run_mu);
    impl_->running = true;
  }
  impl_->listener = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void Service::wait() {
  std::unique_lock lock(impl_->run_mu);
  impl_->run_cv.wait(lock, [this] { return !impl_->running; });
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->listener.joinable()) impl_->listener.join();
  std::vector<std::shared_ptr<TaskRecord>> all;
  {
    std::lock_guard lock(impl_->tasks_mu);
    for (auto& [id, t] : impl_->tasks) {
      t->thread.request_stop();
      all.push_back(t);
    }
  }
  for (auto& t : all) t->halt();
  {
    std::lock_guard lock(impl_->run_mu);
    impl_->running = false;
  }
  impl_->run_cv.notify_all();
}

}  // namespace dualsql
