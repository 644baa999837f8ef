// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dualsql/config.hpp"
#include "dualsql/enumerator.hpp"
#include "dualsql/error.hpp"
#include "dualsql/harness.hpp"
#include "dualsql/oracle.hpp"
#include "dualsql/service.hpp"

namespace {

using namespace dualsql;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

EngineConfig engine_config(const std::string& path) {
  return path.empty() ? EngineConfig{} : load_config(path);
}

Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

int cmd_serve(const std::string& db, const std::string& host, int port, const std::string& cfg_path) {
  EngineConfig cfg = engine_config(cfg_path);
  Service service(load_catalog(db), cfg);
  int bound = service.start(host, port);
  std::cerr << "listening on http://" << host << ":" << bound << "\n";
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  service.wait();
  g_service = nullptr;
  return 0;
}

int cmd_ask(const std::string& db, const std::string& nlq, const std::vector<std::string>& literals,
            const std::string& tsq_path, std::size_t top_k, double timeout, const std::string& mode,
            const std::string& cfg_path, bool as_json) {
  EngineConfig cfg = engine_config(cfg_path);
  auto source = load_catalog(db);
  source.catalog.set_edge_weights(cfg.edge_weights);
  source.db.set_timeout(cfg.probe_timeout);
  ValueIndex index = build_value_index(source.catalog, source.db);
  TaskInputs inputs;
  inputs.nlq = nlq;
  for (const auto& l : literals) inputs.literals.push_back(parse_literal(l));
  if (!tsq_path.empty()) inputs.tsq = parse_tsq(read_file(tsq_path));

  EnumConfig ec = cfg.enumeration;
  ec.mode = mode_from_string(mode);
  ec.max_candidates = top_k;
  if (timeout > 0) ec.timeout = std::chrono::milliseconds(static_cast<long>(timeout * 1000));
  auto model = ec.mode == Mode::kNoGuide ? uniform_model() : lexical_model(cfg.lexical);
  Enumerator en(source.catalog, source.db, *model, &index);
  auto report = en.run(inputs, ec, [&](const Candidate& c) {
    if (as_json) {
      nlohmann::json j{{"rank", c.rank}, {"confidence", c.confidence}, {"sql", c.sql}};
      std::cout << j.dump() << "\n";
    } else {
      std::cout << std::setw(3) << c.rank << "  " << std::scientific << std::setprecision(3)
                << c.confidence << "  " << c.sql << "\n";
    }
    std::cout.flush();
  });
  std::cerr << "status=" << to_string(report.termination) << " candidates=" << report.candidates
            << " expansions=" << report.expansions << " probes=" << report.probes
            << " seconds=" << std::fixed << std::setprecision(2) << report.seconds << "\n";
  if (report.termination == Termination::kError) {
    std::cerr << "engine error: " << report.error << "\n";
    return 1;
  }
  return 0;
}

int cmd_bench(const std::string& db, const std::string& tasks_path, const std::string& mode,
              const std::string& detail, double timeout, std::uint64_t seed,
              const std::string& out_path, int jobs, bool uniform, std::size_t max_candidates,
              bool stop_at_gold, bool no_timings, const std::string& cfg_path) {
  EngineConfig cfg = engine_config(cfg_path);
  auto tasks = load_tasks(tasks_path);
  BenchOptions opts;
  opts.enumeration = cfg.enumeration;
  opts.enumeration.mode = mode_from_string(mode);
  opts.enumeration.timeout = std::chrono::milliseconds(static_cast<long>(timeout * 1000));
  opts.enumeration.max_candidates = max_candidates;
  opts.detail = detail_from_string(detail);
  opts.seed = seed;
  opts.jobs = jobs;
  opts.uniform_model = uniform;
  opts.lexical = cfg.lexical;
  opts.stop_at_gold = stop_at_gold;
  opts.record_timings = !no_timings;
  opts.probe_timeout = cfg.probe_timeout;
  opts.edge_weights = cfg.edge_weights;
  opts.data_root = std::filesystem::path(tasks_path).parent_path();
  if (!db.empty()) {
    std::filesystem::path p(db);
    if (std::filesystem::is_regular_file(p) || std::filesystem::exists(p / "schema.json")) {
      for (auto& t : tasks) t.db = std::filesystem::absolute(p).string();
    } else {
      opts.data_root = p;
    }
  }
  Report report = run_benchmark(tasks, opts);
  std::string json = report_to_json(report, opts.record_timings);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    out << json << "\n";
  }
  std::cout << report_table(report);
  return 0;
}

int cmd_oracle(const std::string& db, const std::string& tsq_path, const std::string& bound,
               const std::vector<std::string>& literals) {
  auto source = load_catalog(db);
  std::optional<TableSketchQuery> tsq;
  if (!tsq_path.empty()) tsq = parse_tsq(read_file(tsq_path));
  std::vector<Literal> lits;
  for (const auto& l : literals) lits.push_back(parse_literal(l));
  auto result = oracle_enumerate(parse_bound(bound), source.catalog, source.db, tsq, lits);
  for (const auto& q : result.queries) std::cout << render_sql(q, source.catalog) << "\n";
  std::cerr << "accepted=" << result.queries.size() << " generated=" << result.generated
            << " executed=" << result.executed << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-specification SQL synthesis"};
  app.require_subcommand(1);

  std::string db, cfg_path, host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--db", db, "Database file or CSV directory")->required();
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--config", cfg_path, "Engine config file");

  std::string tasks_path, mode = "gpqe", detail = "full", out_path;
  double timeout = 60;
  std::uint64_t seed = 42;
  int jobs = 1;
  bool uniform = false, stop_at_gold = false, no_timings = false;
  std::size_t max_candidates = 100;
  auto* bench = app.add_subcommand("bench", "Run a task suite and report top-k accuracy");
  bench->add_option("--db", db, "Database override, or a root directory for task databases");
  bench->add_option("--tasks", tasks_path, "JSON-lines task file")->required();
  bench->add_option("--mode", mode)->check(CLI::IsMember({"gpqe", "noguide", "nopq"}));
  bench->add_option("--detail", detail)->check(CLI::IsMember({"full", "partial", "minimal", "none"}));
  bench->add_option("--timeout", timeout, "Per-task timeout in seconds")->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed);
  bench->add_option("--out", out_path, "Report JSON path");
  bench->add_option("--jobs", jobs, "Parallel task workers")->check(CLI::PositiveNumber);
  bench->add_option("--max-candidates", max_candidates);
  bench->add_flag("--uniform", uniform, "Use uniform guidance");
  bench->add_flag("--stop-at-gold", stop_at_gold, "Halt each task once its gold query is emitted");
  bench->add_flag("--no-timings", no_timings, "Omit wall-clock fields from the report");
  bench->add_option("--config", cfg_path, "Engine config file");

  std::string nlq, tsq_path, ask_mode = "gpqe";
  std::vector<std::string> literals;
  std::size_t top_k = 10;
  double ask_timeout = 0;
  bool as_json = false;
  auto* ask = app.add_subcommand("ask", "Synthesize SQL for one NLQ");
  ask->add_option("--db", db)->required();
  ask->add_option("--nlq", nlq)->required();
  ask->add_option("--literal", literals, "Tagged literal, type:value (repeatable)");
  ask->add_option("--tsq", tsq_path, "Table sketch JSON file");
  ask->add_option("--top-k", top_k)->check(CLI::PositiveNumber);
  ask->add_option("--timeout", ask_timeout, "Seconds (default from config)");
  ask->add_option("--mode", ask_mode)->check(CLI::IsMember({"gpqe", "noguide", "nopq"}));
  ask->add_flag("--json", as_json, "Emit one JSON record per candidate");
  ask->add_option("--config", cfg_path, "Engine config file");

  std::string bound = "select=2,where=2,group=1,order=1,joins=2";
  auto* oracle = app.add_subcommand("oracle", "Brute-force the bounded query family");
  oracle->add_option("--db", db)->required();
  oracle->add_option("--tsq", tsq_path, "Table sketch JSON file");
  oracle->add_option("--bound", bound, "Scope bound, e.g. select=2,where=2,joins=2");
  oracle->add_option("--literal", literals, "Tagged literal, type:value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  // Malformed literals and bounds are usage errors, not engine failures.
  try {
    for (const auto& l : literals) parse_literal(l);
    if (*oracle) parse_bound(bound);
  } catch (const Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*serve) return cmd_serve(db, host, port, cfg_path);
    if (*bench) {
      return cmd_bench(db, tasks_path, mode, detail, timeout, seed, out_path, jobs, uniform,
                       max_candidates, stop_at_gold, no_timings, cfg_path);
    }
    if (*ask) {
      return cmd_ask(db, nlq, literals, tsq_path, top_k, ask_timeout, ask_mode, cfg_path, as_json);
    }
    if (*oracle) return cmd_oracle(db, tsq_path, bound, literals);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
