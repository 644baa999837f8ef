// Copyright 2026 The dualsql Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualsql/joinpath.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <set>

#include "dualsql/error.hpp"

namespace dualsql {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

constexpr double kEps = 1e-9;

// All spanning trees of the subgraph induced by `nodes` with weight at most
// `limit` + eps; returns the minimum weight found (or infinity).
void spanning_trees(const std::vector<TableId>& nodes, const SchemaGraph& graph, double limit,
                    std::vector<std::pair<double, std::vector<std::size_t>>>& out) {
  std::vector<char> in(graph.node_count(), 0);
  for (TableId t : nodes) in[t] = 1;
  std::vector<const SchemaGraph::Edge*> edges;
  for (const auto& e : graph.edges()) {
    if (in[e.a] && in[e.b] && e.a != e.b) edges.push_back(&e);
  }
  const std::size_t need = nodes.size() - 1;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t, double, UnionFind&)> rec = [&](std::size_t i, double w,
                                                                 UnionFind& uf) {
    if (w > limit + kEps) return;
    if (chosen.size() == need) {
      auto sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      out.emplace_back(w, std::move(sorted));
      return;
    }
    if (edges.size() - i < need - chosen.size()) return;
    const auto* e = edges[i];
    if (uf.find(e->a) != uf.find(e->b)) {
      UnionFind next = uf;
      next.unite(e->a, e->b);
      chosen.push_back(e->id);
      rec(i + 1, w + e->weight, next);
      chosen.pop_back();
    }
    rec(i + 1, w, uf);
  };
  UnionFind uf(graph.node_count());
  rec(0, 0.0, uf);
}

// Kruskal weight of the induced subgraph, or nullopt when disconnected.
std::optional<double> mst_weight(const std::vector<TableId>& nodes, const SchemaGraph& graph) {
  std::vector<char> in(graph.node_count(), 0);
  for (TableId t : nodes) in[t] = 1;
  std::vector<const SchemaGraph::Edge*> edges;
  for (const auto& e : graph.edges()) {
    if (in[e.a] && in[e.b]) edges.push_back(&e);
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const auto* x, const auto* y) { return x->weight < y->weight; });
  UnionFind uf(graph.node_count());
  double w = 0;
  std::size_t joined = 0;
  for (const auto* e : edges) {
    if (uf.unite(e->a, e->b)) {
      w += e->weight;
      ++joined;
    }
  }
  if (joined + 1 != nodes.size()) return std::nullopt;
  return w;
}

bool path_less(const JoinPath& a, const JoinPath& b) {
  if (a.tables.size() != b.tables.size()) return a.tables.size() < b.tables.size();
  if (a.edges != b.edges) return a.edges < b.edges;
  return a.tables < b.tables;
}

JoinPath from_edges(std::vector<std::size_t> edges, const std::vector<TableId>& seed,
                    const SchemaGraph& graph) {
  JoinPath jp;
  std::set<TableId> tables(seed.begin(), seed.end());
  for (std::size_t e : edges) {
    tables.insert(graph.edges()[e].a);
    tables.insert(graph.edges()[e].b);
  }
  jp.tables.assign(tables.begin(), tables.end());
  std::sort(edges.begin(), edges.end());
  jp.edges = std::move(edges);
  return jp;
}

}  // namespace

double join_weight(const JoinPath& jp, const SchemaGraph& graph) {
  double w = 0;
  for (std::size_t e : jp.edges) w += graph.edges()[e].weight;
  return w;
}

bool is_tree(const JoinPath& jp, const SchemaGraph& graph) {
  if (jp.tables.empty() || jp.edges.size() + 1 != jp.tables.size()) return false;
  UnionFind uf(graph.node_count());
  for (std::size_t e : jp.edges) {
    if (e >= graph.edges().size()) return false;
    const auto& edge = graph.edges()[e];
    if (!std::binary_search(jp.tables.begin(), jp.tables.end(), edge.a) ||
        !std::binary_search(jp.tables.begin(), jp.tables.end(), edge.b)) {
      return false;
    }
    if (!uf.unite(edge.a, edge.b)) return false;
  }
  return true;
}

std::vector<JoinPath> steiner_trees(const std::vector<TableId>& terminals,
                                    const SchemaGraph& graph) {
  std::vector<TableId> terms(terminals.begin(), terminals.end());
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  if (terms.empty()) return {};
  if (terms.size() == 1) return {JoinPath{terms, {}}};

  std::vector<TableId> others;
  for (TableId t = 0; t < static_cast<TableId>(graph.node_count()); ++t) {
    if (!std::binary_search(terms.begin(), terms.end(), t)) others.push_back(t);
  }
  double min_edge = std::numeric_limits<double>::infinity();
  for (const auto& e : graph.edges()) min_edge = std::min(min_edge, e.weight);

  // Subsets of non-terminals grouped by size, so that the search can stop
  // once no larger node set can beat the best weight.
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::vector<std::size_t>>> found;
  const std::size_t n = others.size();
  for (std::size_t size = 0; size <= n; ++size) {
    if (static_cast<double>(terms.size() + size - 1) * min_edge > best + kEps) break;
    std::vector<char> pick(n, 0);
    std::fill(pick.end() - static_cast<std::ptrdiff_t>(size), pick.end(), 1);
    do {
      std::vector<TableId> nodes = terms;
      for (std::size_t i = 0; i < n; ++i) {
        if (pick[i]) nodes.push_back(others[i]);
      }
      std::sort(nodes.begin(), nodes.end());
      auto w = mst_weight(nodes, graph);
      if (!w || *w > best + kEps) continue;
      if (*w < best - kEps) {
        best = *w;
        found.clear();
      }
      spanning_trees(nodes, graph, best, found);
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  std::vector<JoinPath> out;
  std::set<std::vector<std::size_t>> seen;
  for (auto& [w, edges] : found) {
    if (w > best + kEps) continue;
    if (!seen.insert(edges).second) continue;
    out.push_back(from_edges(edges, terms, graph));
  }
  std::sort(out.begin(), out.end(), path_less);
  return out;
}

JoinPath steiner(const std::vector<TableId>& terminals, const SchemaGraph& graph) {
  auto trees = steiner_trees(terminals, graph);
  if (trees.empty()) throw Error("terminal tables are disconnected in the schema graph");
  return trees.front();
}

std::vector<JoinPath> expand_one_hop(const JoinPath& jp, const SchemaGraph& graph, int depth) {
  std::vector<JoinPath> out;
  std::set<std::pair<std::vector<std::size_t>, std::vector<TableId>>> seen;
  std::vector<JoinPath> frontier{jp};
  for (int level = 0; level < depth; ++level) {
    std::vector<JoinPath> next;
    for (const JoinPath& base : frontier) {
      for (const auto& e : graph.edges()) {
        bool has_a = std::binary_search(base.tables.begin(), base.tables.end(), e.a);
        bool has_b = std::binary_search(base.tables.begin(), base.tables.end(), e.b);
        if (has_a == has_b) continue;
        auto edges = base.edges;
        edges.push_back(e.id);
        JoinPath grown = from_edges(std::move(edges), base.tables, graph);
        if (seen.insert({grown.edges, grown.tables}).second) {
          out.push_back(grown);
          next.push_back(std::move(grown));
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end(), path_less);
  return out;
}

std::vector<JoinPath> construct_join_paths(const std::vector<TableId>& tables,
                                           const SchemaGraph& graph, const JoinOptions& options) {
  std::vector<JoinPath> out;
  if (tables.empty()) {
    for (TableId t = 0; t < static_cast<TableId>(graph.node_count()); ++t) {
      out.push_back(JoinPath{{t}, {}});
    }
  } else {
    std::set<std::pair<std::vector<std::size_t>, std::vector<TableId>>> seen;
    for (const JoinPath& tree : steiner_trees(tables, graph)) {
      if (seen.insert({tree.edges, tree.tables}).second) out.push_back(tree);
      for (JoinPath& grown : expand_one_hop(tree, graph, options.expand_depth)) {
        if (seen.insert({grown.edges, grown.tables}).second) out.push_back(std::move(grown));
      }
    }
  }
  std::sort(out.begin(), out.end(), path_less);
  if (out.size() > options.max_paths) out.resize(options.max_paths);
  return out;
}

std::vector<JoinPath> construct_join_paths(const PartialQuery& pq, const SchemaGraph& graph,
                                           const JoinOptions& options) {
  return construct_join_paths(referenced_tables(pq, graph.catalog()), graph, options);
}

}  // namespace dualsql
