#include <vector>

#include "lovo/errors.hpp"
#include "lovo/graph.hpp"

namespace lovo {

namespace {

void check_arguments(const Admg& g, std::string_view a, std::string_view b, const NodeSet& given) {
  if (a == b) throw DomainError("separation query needs two distinct nodes");
  g.index(a);
  g.index(b);
  for (const auto& s : given) {
    g.index(s);
    if (s == a || s == b) throw DomainError("conditioning set overlaps the query pair");
  }
}

// Ancestral closure including the seeds themselves.
std::vector<char> ancestral_mask(const Admg& g, const std::vector<std::size_t>& seeds) {
  std::vector<char> in(g.size(), 0);
  std::vector<std::size_t> stack = seeds;
  for (std::size_t s : seeds) in[s] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t p : g.parent_indices(v))
      if (!in[p]) {
        in[p] = 1;
        stack.push_back(p);
      }
  }
  return in;
}

}  // namespace

bool d_separated(const Admg& dag, std::string_view a, std::string_view b, const NodeSet& given) {
  if (!dag.is_dag()) throw DomainError("d_separated requires a DAG");
  check_arguments(dag, a, b, given);
  const std::size_t n = dag.size();
  const std::size_t ia = dag.index(a), ib = dag.index(b);
  std::vector<std::size_t> seeds{ia, ib};
  std::vector<char> blocked(n, 0);
  for (const auto& s : given) {
    seeds.push_back(dag.index(s));
    blocked[dag.index(s)] = 1;
  }
  const std::vector<char> keep = ancestral_mask(dag, seeds);

  // moralize the ancestral subgraph
  std::vector<std::vector<std::size_t>> adj(n);
  auto link = [&](std::size_t u, std::size_t v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    const auto pa = dag.parent_indices(v);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      link(pa[i], v);
      for (std::size_t j = i + 1; j < pa.size(); ++j) link(pa[i], pa[j]);
    }
  }

  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{ia};
  seen[ia] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (v == ib) return false;
    for (std::size_t w : adj[v])
      if (!seen[w] && !blocked[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return true;
}

bool m_separated(const Admg& g, std::string_view a, std::string_view b, const NodeSet& given) {
  check_arguments(g, a, b, given);
  const std::size_t n = g.size();
  const std::size_t ia = g.index(a), ib = g.index(b);
  std::vector<std::size_t> seeds;
  std::vector<char> in_s(n, 0);
  for (const auto& s : given) {
    seeds.push_back(g.index(s));
    in_s[g.index(s)] = 1;
  }
  const std::vector<char> an_s = ancestral_mask(g, seeds);

  // state = (node, whether the edge we arrived by has an arrowhead at node)
  struct Edge {
    std::size_t to;
    bool head_here;   // arrowhead at the current node
    bool head_there;  // arrowhead at `to`
  };
  auto edges_at = [&](std::size_t v) {
    std::vector<Edge> out;
    for (std::size_t w = 0; w < n; ++w) {
      if (g.directed(v, w)) out.push_back({w, false, true});
      if (g.directed(w, v)) out.push_back({w, true, false});
      if (g.bidirected(v, w)) out.push_back({w, true, true});
    }
    return out;
  };

  std::vector<char> seen(2 * n, 0);
  std::vector<std::pair<std::size_t, bool>> stack;
  for (const Edge& e : edges_at(ia)) {
    const std::size_t key = 2 * e.to + (e.head_there ? 1 : 0);
    if (!seen[key]) {
      seen[key] = 1;
      stack.emplace_back(e.to, e.head_there);
    }
  }
  while (!stack.empty()) {
    const auto [v, arrived_head] = stack.back();
    stack.pop_back();
    if (v == ib) return false;
    if (v == ia) continue;
    for (const Edge& e : edges_at(v)) {
      const bool collider = arrived_head && e.head_here;
      if (collider ? !an_s[v] : in_s[v]) continue;
      const std::size_t key = 2 * e.to + (e.head_there ? 1 : 0);
      if (!seen[key]) {
        seen[key] = 1;
        stack.emplace_back(e.to, e.head_there);
      }
    }
  }
  return true;
}

}  // namespace lovo
