// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dualsql/error.hpp"

namespace dualsql {

using json = nlohmann::json;

namespace {

Literal literal_from_json(const json& j) {
  std::string type = j.at("type").get<std::string>();
  const json& v = j.at("value");
  if (type == "number") {
    if (v.is_number()) return Value(v.get<double>());
    return parse_literal("number:" + v.get<std::string>());
  }
  if (type == "text") return Value(v.is_string() ? v.get<std::string>() : v.dump());
  throw Error("literal type must be text or number");
}

}  // namespace

Literal parse_literal(std::string_view typed) {
  auto colon = typed.find(':');
  if (colon == std::string_view::npos) throw Error("literal must look like type:value");
  auto type = typed.substr(0, colon);
  std::string value(typed.substr(colon + 1));
  if (type == "text") return Value(value);
  if (type == "number") {
    std::size_t used = 0;
    double d = 0;
    try {
      d = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) throw Error("not a number: " + value);
    return Value(d);
  }
  throw Error("literal type must be text or number: " + std::string(type));
}

std::vector<Task> parse_tasks(std::string_view jsonl) {
  std::vector<Task> tasks;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      Task t;
      t.id = j.at("id").get<std::string>();
      t.nlq = j.at("nlq").get<std::string>();
      if (j.contains("literals")) {
        for (const auto& l : j.at("literals")) t.literals.push_back(literal_from_json(l));
      }
      t.gold_sql = j.at("gold_sql").get<std::string>();
      t.db = j.at("db").get<std::string>();
      if (j.contains("tsq") && !j.at("tsq").is_null()) t.tsq = parse_tsq(j.at("tsq").dump());
      tasks.push_back(std::move(t));
    } catch (const json::exception& e) {
      throw Error("task line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("task line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return tasks;
}

std::vector<Task> load_tasks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read task file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tasks(buf.str());
}

std::string task_to_json(const Task& task) {
  json j;
  j["id"] = task.id;
  j["nlq"] = task.nlq;
  j["literals"] = json::array();
  for (const auto& l : task.literals) {
    if (l.is_number()) {
      j["literals"].push_back({{"type", "number"}, {"value", l.number()}});
    } else {
      j["literals"].push_back({{"type", "text"}, {"value", l.text()}});
    }
  }
  j["gold_sql"] = task.gold_sql;
  j["db"] = task.db;
  j["tsq"] = task.tsq ? json::parse(tsq_to_json(*task.tsq)) : json(nullptr);
  return j.dump();
}

std::string_view to_string(Detail d) {
  switch (d) {
    case Detail::kFull: return "full";
    case Detail::kPartial: return "partial";
    case Detail::kMinimal: return "minimal";
    case Detail::kNone: return "none";
  }
  return "?";
}

Detail detail_from_string(std::string_view name) {
  if (name == "full") return Detail::kFull;
  if (name == "partial") return Detail::kPartial;
  if (name == "minimal") return Detail::kMinimal;
  if (name == "none") return Detail::kNone;
  throw Error("unknown detail level: " + std::string(name));
}

std::string_view to_string(Difficulty d) {
  switch (d) {
    case Difficulty::kEasy: return "easy";
    case Difficulty::kMedium: return "medium";
    case Difficulty::kHard: return "hard";
  }
  return "?";
}

Difficulty classify(const PartialQuery& gold) {
  if (gold.clauses && gold.clauses->group_by) return Difficulty::kHard;
  if (gold.clauses && gold.clauses->where) return Difficulty::kMedium;
  return Difficulty::kEasy;
}

SynthesizedTsq synthesize_tsq(const PartialQuery& gold, const SchemaCatalog& catalog, Database& db,
                              Detail detail, std::uint64_t seed) {
  SynthesizedTsq out;
  if (detail == Detail::kNone) return out;
  TableSketchQuery tsq;
  for (const auto& t : projected_types(gold, catalog)) tsq.types.push_back(t.value_or(SemanticType::kText));
  tsq.sorted = gold.clauses && gold.clauses->order_by;
  tsq.limit = gold.order_tail ? gold.order_tail->limit : 0;
  if (detail == Detail::kMinimal) {
    out.tsq = std::move(tsq);
    return out;
  }
  auto rows = db.query(render_sql(gold, catalog, RenderMode::kExecutable)).rows;
  if (rows.empty()) throw Error("gold query returns no rows");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> picks;
  if (rows.size() < 2) {
    picks = {0};
    out.degenerate = true;
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
    std::size_t a = pick(rng);
    std::size_t b = a;
    while (b == a) b = pick(rng);
    picks = {std::min(a, b), std::max(a, b)};
  }
  for (std::size_t r : picks) {
    ExampleTuple tuple;
    for (const Value& v : rows[r]) {
      tuple.push_back(v.is_null() ? ExampleCell::empty() : ExampleCell::exact(v));
    }
    tsq.tuples.push_back(std::move(tuple));
  }
  if (detail == Detail::kPartial && tsq.types.size() >= 2) {
    std::uniform_int_distribution<std::size_t> col(0, tsq.types.size() - 1);
    std::size_t erase = col(rng);
    for (auto& tuple : tsq.tuples) tuple[erase] = ExampleCell::empty();
  }
  out.tsq = std::move(tsq);
  return out;
}

namespace {

struct LoadedSource {
  SchemaCatalog catalog;
  Database db;
  std::unique_ptr<ValueIndex> index;
};

std::uint64_t task_seed(std::uint64_t seed, const std::string& id) {
  // FNV-1a keeps per-task seeds independent of task order.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : id) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return seed ^ h;
}

bool same_result(const PartialQuery& a, const PartialQuery& b, const SchemaCatalog& catalog,
                 Database& db) {
  auto ra = db.query(render_sql(a, catalog, RenderMode::kExecutable)).rows;
  auto rb = db.query(render_sql(b, catalog, RenderMode::kExecutable)).rows;
  bool ordered = (a.clauses && a.clauses->order_by) || (b.clauses && b.clauses->order_by);
  if (!ordered) {
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
  }
  return ra == rb;
}

TaskResult run_task(const Task& task, LoadedSource& src, const GuidanceModel& model,
                    const BenchOptions& opts) {
  TaskResult r;
  r.id = task.id;
  const auto start = std::chrono::steady_clock::now();
  try {
    PartialQuery gold = parse_gold(task.gold_sql, src.catalog);
    r.difficulty = classify(gold);
    TaskInputs inputs{task.nlq, task.literals, std::nullopt};
    if (opts.detail != Detail::kNone) {
      if (task.tsq) {
        inputs.tsq = task.tsq;
      } else {
        auto syn = synthesize_tsq(gold, src.catalog, src.db, opts.detail, task_seed(opts.seed, task.id));
        inputs.tsq = syn.tsq;
        r.degenerate_tsq = syn.degenerate;
      }
      r.tsq_tuples = inputs.tsq ? inputs.tsq->tuples.size() : 0;
    }
    std::stop_source stopper;
    EnumConfig cfg = opts.enumeration;
    cfg.stop = stopper.get_token();
    cfg.seed = opts.seed;
    Enumerator en(src.catalog, src.db, model, src.index.get());
    auto report = en.run(inputs, cfg, [&](const Candidate& c) {
      if (r.gold_rank) return;
      bool hit = opts.execution_match ? same_result(c.state.pq, gold, src.catalog, src.db)
                                      : canonical_eq(c.state.pq, gold, src.catalog);
      if (!hit) return;
      r.gold_rank = c.rank;
      r.probes_to_gold = c.probes_at_emit;
      if (opts.stop_at_gold) stopper.request_stop();
    });
    r.candidates = report.candidates;
    r.probes = report.probes;
    r.expansions = report.expansions;
    r.termination = std::string(to_string(report.termination));
    r.error = report.error;
    if (!r.gold_rank) r.probes_to_gold = report.probes;
  } catch (const std::exception& e) {
    r.termination = "error";
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

Report run_benchmark(const std::vector<Task>& tasks, const BenchOptions& opts) {
  Report report;
  report.mode = std::string(to_string(opts.enumeration.mode));
  report.detail = std::string(to_string(opts.detail));
  bool uniform = opts.uniform_model || opts.enumeration.mode == Mode::kNoGuide;
  auto model = uniform ? uniform_model() : lexical_model(opts.lexical);
  report.model = std::string(model->name());
  report.seed = opts.seed;
  report.tasks.resize(tasks.size());

  // Sources are loaded once; each worker gets private connections.
  std::map<std::string, std::unique_ptr<LoadedSource>> prototypes;
  for (const auto& t : tasks) {
    if (prototypes.count(t.db)) continue;
    std::filesystem::path p = t.db;
    if (p.is_relative() && !opts.data_root.empty()) p = opts.data_root / p;
    auto loaded = load_catalog(p);
    loaded.catalog.set_edge_weights(opts.edge_weights);
    loaded.db.set_timeout(opts.probe_timeout);
    auto src = std::make_unique<LoadedSource>(
        LoadedSource{std::move(loaded.catalog), std::move(loaded.db), nullptr});
    src->index = std::make_unique<ValueIndex>(build_value_index(src->catalog, src->db));
    prototypes.emplace(t.db, std::move(src));
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&](bool own_connections) {
    std::map<std::string, std::unique_ptr<LoadedSource>> local;
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      LoadedSource* src = prototypes.at(task.db).get();
      if (own_connections) {
        auto& mine = local[task.db];
        if (!mine) {
          mine = std::make_unique<LoadedSource>(
              LoadedSource{src->catalog, src->db.clone(), nullptr});
          mine->index = std::make_unique<ValueIndex>(*src->index);
        }
        src = mine.get();
      }
      report.tasks[i] = run_task(task, *src, *model, opts);
    }
  };
  int jobs = std::max(1, opts.jobs);
  if (jobs == 1) {
    worker(false);
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker, true);
  }

  for (const auto& r : report.tasks) {
    for (const std::string& bucket : {std::string(to_string(r.difficulty)), std::string("all")}) {
      auto& b = report.buckets[bucket];
      ++b.tasks;
      if (r.gold_rank == 1) ++b.top1;
      if (r.gold_rank && r.gold_rank <= 10) ++b.top10;
      if (r.gold_rank && r.gold_rank <= 100) ++b.top100;
    }
  }
  return report;
}

std::string report_to_json(const Report& report, bool timings) {
  json j;
  j["mode"] = report.mode;
  j["detail"] = report.detail;
  j["model"] = report.model;
  j["seed"] = report.seed;
  j["tasks"] = json::array();
  for (const auto& r : report.tasks) {
    json t{{"id", r.id},
           {"difficulty", std::string(to_string(r.difficulty))},
           {"gold_rank", r.gold_rank ? json(r.gold_rank) : json(nullptr)},
           {"candidates", r.candidates},
           {"probes", r.probes},
           {"probes_to_gold", r.probes_to_gold},
           {"expansions", r.expansions},
           {"tsq_tuples", r.tsq_tuples},
           {"degenerate_tsq", r.degenerate_tsq},
           {"termination", r.termination}};
    if (timings) t["seconds"] = r.seconds;
    if (!r.error.empty()) t["error"] = r.error;
    j["tasks"].push_back(std::move(t));
  }
  json buckets = json::object();
  for (const auto& [name, b] : report.buckets) {
    auto pct = [&](std::size_t n) { return b.tasks ? 100.0 * static_cast<double>(n) / static_cast<double>(b.tasks) : 0.0; };
    buckets[name] = {{"tasks", b.tasks},          {"top1", b.top1},
                     {"top10", b.top10},          {"top100", b.top100},
                     {"top1_pct", pct(b.top1)},   {"top10_pct", pct(b.top10)},
                     {"top100_pct", pct(b.top100)}};
  }
  j["buckets"] = std::move(buckets);
  return j.dump(2);
}

std::string report_table(const Report& report) {
  std::ostringstream out;
  out << "mode=" << report.mode << " detail=" << report.detail << " model=" << report.model
      << " seed=" << report.seed << "\n";
  out << std::left << std::setw(10) << "task" << std::setw(8) << "bucket" << std::right
      << std::setw(6) << "rank" << std::setw(8) << "cands" << std::setw(9) << "probes"
      << std::setw(9) << "to_gold" << std::setw(9) << "secs" << "  end\n";
  for (const auto& r : report.tasks) {
    out << std::left << std::setw(10) << r.id << std::setw(8) << to_string(r.difficulty)
        << std::right << std::setw(6) << (r.gold_rank ? std::to_string(r.gold_rank) : "-")
        << std::setw(8) << r.candidates << std::setw(9) << r.probes << std::setw(9)
        << r.probes_to_gold << std::setw(9) << std::fixed << std::setprecision(2) << r.seconds
        << "  " << r.termination;
    if (!r.error.empty()) out << " (" << r.error << ")";
    out << "\n";
  }
  out << "\n" << std::left << std::setw(8) << "bucket" << std::right << std::setw(7) << "tasks"
      << std::setw(7) << "top1" << std::setw(7) << "top10" << std::setw(8) << "top100" << "\n";
  for (const auto& [name, b] : report.buckets) {
    out << std::left << std::setw(8) << name << std::right << std::setw(7) << b.tasks
        << std::setw(7) << b.top1 << std::setw(7) << b.top10 << std::setw(8) << b.top100 << "\n";
  }
  return out.str();
}

}  // namespace dualsql
