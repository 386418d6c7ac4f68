#pragma once
// Exhaustive graph enumeration and path-based reference implementations used
// as independent oracles by the test suites.

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "lovo/errors.hpp"
#include "lovo/graph.hpp"

namespace lovo::testing {

inline std::vector<NodeId> names(std::size_t n) {
  static const char* kNames[] = {"X", "Y", "Z1", "Z2", "Z3", "Z4", "Z5", "Z6"};
  return std::vector<NodeId>(kNames, kNames + n);
}

inline bool is_acyclic(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> indeg(n, 0);
  for (auto [a, b] : edges) ++indeg[b];
  std::vector<int> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (!indeg[i]) ready.push_back(static_cast<int>(i));
  std::size_t seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (auto [a, b] : edges)
      if (a == v && --indeg[b] == 0) ready.push_back(b);
  }
  return seen == n;
}

/// Every DAG on the given nodes (each unordered pair: none, a->b, b->a).
inline void for_each_dag(const std::vector<NodeId>& nodes, const std::function<void(const Admg&)>& fn) {
  const std::size_t n = nodes.size();
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(int(i), int(j));
  std::size_t total = 1;
  for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::pair<int, int>> edges;
    std::size_t c = code;
    for (auto [a, b] : pairs) {
      const std::size_t s = c % 3;
      c /= 3;
      if (s == 1) edges.emplace_back(a, b);
      if (s == 2) edges.emplace_back(b, a);
    }
    if (!is_acyclic(n, edges)) continue;
    std::vector<NodePair> named;
    for (auto [a, b] : edges) named.emplace_back(nodes[a], nodes[b]);
    fn(Admg(nodes, named));
  }
}

/// Every ADMG on the given nodes; pairs may carry a directed and a bidirected
/// edge at the same time.
inline void for_each_admg(const std::vector<NodeId>& nodes, const std::function<void(const Admg&)>& fn) {
  const std::size_t n = nodes.size();
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(int(i), int(j));
  for_each_dag(nodes, [&](const Admg& dag) {
    const std::size_t m = pairs.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      std::vector<NodePair> bi;
      for (std::size_t k = 0; k < m; ++k)
        if (mask & (std::size_t{1} << k)) bi.emplace_back(nodes[pairs[k].first], nodes[pairs[k].second]);
      fn(Admg(nodes, dag.directed_edges(), bi));
    }
  });
}

// A path step: the edge used and the arrowhead marks at both ends.
struct Step {
  std::size_t to;
  bool head_from;
  bool head_to;
};

inline std::vector<Step> steps_from(const Admg& g, std::size_t v) {
  std::vector<Step> out;
  for (std::size_t w = 0; w < g.size(); ++w) {
    if (g.directed(v, w)) out.push_back({w, false, true});
    if (g.directed(w, v)) out.push_back({w, true, false});
    if (g.bidirected(v, w)) out.push_back({w, true, true});
  }
  return out;
}

/// Calls fn(nodes, steps) for every simple path from a to b; intermediate
/// nodes restricted by `allowed`.
inline void for_each_path(const Admg& g, std::size_t a, std::size_t b,
                          const std::function<bool(std::size_t)>& allowed,
                          const std::function<void(const std::vector<std::size_t>&, const std::vector<Step>&)>& fn) {
  std::vector<std::size_t> path{a};
  std::vector<Step> steps;
  std::vector<char> on(g.size(), 0);
  on[a] = 1;
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    for (const Step& s : steps_from(g, v)) {
      if (on[s.to]) continue;
      if (s.to == b) {
        path.push_back(b);
        steps.push_back(s);
        fn(path, steps);
        path.pop_back();
        steps.pop_back();
        continue;
      }
      if (!allowed(s.to)) continue;
      on[s.to] = 1;
      path.push_back(s.to);
      steps.push_back(s);
      dfs(s.to);
      path.pop_back();
      steps.pop_back();
      on[s.to] = 0;
    }
  };
  dfs(a);
}

/// Transitive closure by repeated relaxation: reach[i][j] iff directed path i->...->j.
inline std::vector<std::vector<char>> naive_closure(const Admg& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = g.directed(i, j);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (r[i][k] && r[k][j] && !r[i][j]) {
            r[i][j] = 1;
            changed = true;
          }
  }
  return r;
}

/// Separation decided by enumerating every simple path (works for DAGs and ADMGs).
inline bool path_separated(const Admg& g, const NodeId& a, const NodeId& b, const NodeSet& s) {
  const auto reach = naive_closure(g);
  std::vector<char> in_s(g.size(), 0), an_s(g.size(), 0);
  for (const auto& n : s) in_s[g.index(n)] = an_s[g.index(n)] = 1;
  for (std::size_t v = 0; v < g.size(); ++v)
    for (const auto& n : s)
      if (reach[v][g.index(n)]) an_s[v] = 1;
  bool open_found = false;
  for_each_path(g, g.index(a), g.index(b), [](std::size_t) { return true; },
                [&](const std::vector<std::size_t>& nodes, const std::vector<Step>& steps) {
                  for (std::size_t k = 1; k + 1 < nodes.size(); ++k) {
                    const bool collider = steps[k - 1].head_to && steps[k].head_from;
                    if (collider ? !an_s[nodes[k]] : in_s[nodes[k]]) return;
                  }
                  open_found = true;
                });
  return !open_found;
}

/// Latent projection by path closure: A->B iff a directed path with all
/// interior nodes dropped; A<->B iff a collider-free path through dropped
/// nodes with arrowheads at both A and B.
inline Admg path_projection(const Admg& g, const NodeSet& drop) {
  std::vector<NodeId> kept;
  for (const auto& n : g.nodes())
    if (!drop.count(n)) kept.push_back(n);
  std::vector<NodePair> dir, bi;
  auto dropped = [&](std::size_t v) { return drop.count(g.name(v)) > 0; };
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = 0; j < kept.size(); ++j) {
      if (i == j) continue;
      const std::size_t a = g.index(kept[i]), b = g.index(kept[j]);
      bool has_dir = false, has_bi = false;
      for_each_path(g, a, b, dropped, [&](const std::vector<std::size_t>&, const std::vector<Step>& steps) {
        bool directed_path = true;
        for (const Step& s : steps) directed_path = directed_path && !s.head_from && s.head_to;
        if (directed_path) has_dir = true;
        bool no_collider = true;
        for (std::size_t k = 1; k < steps.size(); ++k)
          if (steps[k - 1].head_to && steps[k].head_from) no_collider = false;
        if (no_collider && steps.front().head_from && steps.back().head_to) has_bi = true;
      });
      if (has_dir) dir.emplace_back(kept[i], kept[j]);
      if (has_bi && i < j) bi.emplace_back(kept[i], kept[j]);
    }
  return Admg(kept, dir, bi);
}

}  // namespace lovo::testing
