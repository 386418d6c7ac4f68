#include "lovo/graph.hpp"

#include <algorithm>
#include <deque>

#include "lovo/errors.hpp"

namespace lovo {

namespace {

void init_storage(std::vector<NodeId>& nodes, std::map<NodeId, std::size_t, std::less<>>& index,
                  std::vector<std::uint8_t>& dir, std::vector<std::uint8_t>& bi) {
  index.clear();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].empty()) throw DomainError("node names must be non-empty");
    if (!index.emplace(nodes[i], i).second) throw DomainError("duplicate node name: " + nodes[i]);
  }
  dir.assign(nodes.size() * nodes.size(), 0);
  bi.assign(nodes.size() * nodes.size(), 0);
}

}  // namespace

Admg::Admg(std::vector<NodeId> nodes, const std::vector<NodePair>& directed,
           const std::vector<NodePair>& bidirected)
    : nodes_(std::move(nodes)) {
  init_storage(nodes_, index_, dir_, bi_);
  const std::size_t n = size();
  for (const auto& [from, to] : directed) {
    const std::size_t i = index(from), j = index(to);
    if (i == j) throw DomainError("self-loop on " + from);
    dir_[i * n + j] = 1;
  }
  for (const auto& [a, b] : bidirected) {
    const std::size_t i = index(a), j = index(b);
    if (i == j) throw DomainError("self-loop on " + a);
    bi_[i * n + j] = bi_[j * n + i] = 1;
  }
  validate();
}

std::size_t Admg::index(std::string_view n) const {
  auto it = index_.find(n);
  if (it == index_.end()) throw DomainError("unknown node: " + std::string(n));
  return it->second;
}

bool Admg::has_directed(std::string_view from, std::string_view to) const {
  return directed(index(from), index(to));
}

bool Admg::has_bidirected(std::string_view a, std::string_view b) const {
  return bidirected(index(a), index(b));
}

std::vector<std::size_t> Admg::parent_indices(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < size(); ++j)
    if (directed(j, i)) out.push_back(j);
  return out;
}

std::vector<std::size_t> Admg::child_indices(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < size(); ++j)
    if (directed(i, j)) out.push_back(j);
  return out;
}

std::vector<std::size_t> Admg::sibling_indices(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < size(); ++j)
    if (bidirected(i, j)) out.push_back(j);
  return out;
}

namespace {
NodeSet names_of(const Admg& g, const std::vector<std::size_t>& idx) {
  NodeSet out;
  for (std::size_t i : idx) out.insert(g.name(i));
  return out;
}
}  // namespace

NodeSet Admg::parents(std::string_view n) const { return names_of(*this, parent_indices(index(n))); }
NodeSet Admg::children(std::string_view n) const { return names_of(*this, child_indices(index(n))); }
NodeSet Admg::siblings(std::string_view n) const { return names_of(*this, sibling_indices(index(n))); }

std::vector<NodePair> Admg::directed_edges() const {
  std::vector<NodePair> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (directed(i, j)) out.emplace_back(nodes_[i], nodes_[j]);
  return out;
}

std::vector<NodePair> Admg::bidirected_edges() const {
  std::vector<NodePair> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (bidirected(i, j)) out.emplace_back(nodes_[i], nodes_[j]);
  return out;
}

std::size_t Admg::directed_count() const {
  return static_cast<std::size_t>(std::count(dir_.begin(), dir_.end(), std::uint8_t{1}));
}

std::size_t Admg::bidirected_count() const {
  return static_cast<std::size_t>(std::count(bi_.begin(), bi_.end(), std::uint8_t{1})) / 2;
}

Admg Admg::directed_part() const {
  Admg out = *this;
  std::fill(out.bi_.begin(), out.bi_.end(), std::uint8_t{0});
  return out;
}

void Admg::validate() const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (directed(i, i) || bidirected(i, i)) throw DomainError("self-loop on " + nodes_[i]);
  }
  (void)topological_indices(*this);
}

bool operator==(const Admg& a, const Admg& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::size_t> map(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto it = b.index_.find(a.nodes_[i]);
    if (it == b.index_.end()) return false;
    map[i] = it->second;
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a.directed(i, j) != b.directed(map[i], map[j])) return false;
      if (a.bidirected(i, j) != b.bidirected(map[i], map[j])) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------

AdmgBuilder::AdmgBuilder(std::vector<NodeId> nodes) {
  g_.nodes_ = std::move(nodes);
  init_storage(g_.nodes_, g_.index_, g_.dir_, g_.bi_);
}

AdmgBuilder::AdmgBuilder(const Admg& g) : g_(g) {}

AdmgBuilder& AdmgBuilder::add_directed(std::size_t from, std::size_t to) {
  if (from == to) throw DomainError("self-loop on " + g_.name(from));
  g_.dir_[from * size() + to] = 1;
  return *this;
}

AdmgBuilder& AdmgBuilder::remove_directed(std::size_t from, std::size_t to) {
  g_.dir_[from * size() + to] = 0;
  return *this;
}

AdmgBuilder& AdmgBuilder::add_bidirected(std::size_t a, std::size_t b) {
  if (a == b) throw DomainError("self-loop on " + g_.name(a));
  g_.bi_[a * size() + b] = g_.bi_[b * size() + a] = 1;
  return *this;
}

AdmgBuilder& AdmgBuilder::remove_bidirected(std::size_t a, std::size_t b) {
  g_.bi_[a * size() + b] = g_.bi_[b * size() + a] = 0;
  return *this;
}

AdmgBuilder& AdmgBuilder::add_directed(std::string_view from, std::string_view to) {
  return add_directed(g_.index(from), g_.index(to));
}

AdmgBuilder& AdmgBuilder::add_bidirected(std::string_view a, std::string_view b) {
  return add_bidirected(g_.index(a), g_.index(b));
}

bool AdmgBuilder::creates_cycle(std::size_t from, std::size_t to) const {
  if (from == to) return true;
  // cycle iff `from` is reachable from `to`
  std::vector<char> seen(size(), 0);
  std::vector<std::size_t> stack{to};
  seen[to] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (v == from) return true;
    for (std::size_t w = 0; w < size(); ++w)
      if (g_.directed(v, w) && !seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return false;
}

Admg AdmgBuilder::build() const {
  g_.validate();
  return g_;
}

// ---------------------------------------------------------------------------

UndirectedGraph::UndirectedGraph(std::vector<NodeId> nodes, const std::vector<NodePair>& edges)
    : nodes_(std::move(nodes)) {
  NodeSet known(nodes_.begin(), nodes_.end());
  if (known.size() != nodes_.size()) throw DomainError("duplicate node name in undirected graph");
  for (const auto& [a, b] : edges) {
    if (!known.count(a) || !known.count(b)) throw DomainError("edge endpoint not in graph");
    if (a == b) throw DomainError("self-loop on " + a);
    edges_.insert(a < b ? NodePair{a, b} : NodePair{b, a});
  }
}

bool UndirectedGraph::has_edge(std::string_view a, std::string_view b) const {
  NodePair key = a < b ? NodePair{std::string(a), std::string(b)} : NodePair{std::string(b), std::string(a)};
  return edges_.count(key) > 0;
}

NodeSet UndirectedGraph::neighbors(std::string_view n) const {
  NodeSet out;
  for (const auto& [a, b] : edges_) {
    if (a == n) out.insert(b);
    if (b == n) out.insert(a);
  }
  return out;
}

// ---------------------------------------------------------------------------

Admg latent_project(const Admg& g, std::string_view drop) {
  const std::size_t d = g.index(drop);
  std::vector<NodeId> kept;
  std::vector<std::size_t> old;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (i != d) {
      kept.push_back(g.name(i));
      old.push_back(i);
    }
  AdmgBuilder b(kept);
  for (std::size_t a = 0; a < old.size(); ++a) {
    const std::size_t ia = old[a];
    for (std::size_t c = 0; c < old.size(); ++c) {
      if (a == c) continue;
      const std::size_t ic = old[c];
      if (g.directed(ia, ic) || (g.directed(ia, d) && g.directed(d, ic))) b.add_directed(a, c);
      if (c > a) {
        const bool head_a = g.directed(d, ia) || g.bidirected(d, ia);
        const bool head_c = g.directed(d, ic) || g.bidirected(d, ic);
        // d must be a non-collider: at least one of the two edges leaves d by a tail
        const bool noncollider = g.directed(d, ia) || g.directed(d, ic);
        if (g.bidirected(ia, ic) || (head_a && head_c && noncollider)) b.add_bidirected(a, c);
      }
    }
  }
  return b.build();
}

Admg latent_project(const Admg& g, const std::vector<NodeId>& drops) {
  Admg out = g;
  for (const auto& d : drops) out = latent_project(out, d);
  return out;
}

UndirectedGraph moral_graph(const Admg& dag) {
  if (!dag.is_dag()) throw DomainError("moral_graph requires a DAG");
  std::vector<NodePair> edges;
  const std::size_t n = dag.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool linked = dag.directed(i, j) || dag.directed(j, i);
      for (std::size_t c = 0; c < n && !linked; ++c) linked = dag.directed(i, c) && dag.directed(j, c);
      if (linked) edges.emplace_back(dag.name(i), dag.name(j));
    }
  return UndirectedGraph(dag.nodes(), edges);
}

std::vector<std::size_t> topological_indices(const Admg& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> indeg(n, 0), order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (g.directed(i, j)) ++indeg[j];
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push_back(i);
  while (!ready.empty()) {
    const std::size_t v = ready.front();
    ready.pop_front();
    order.push_back(v);
    for (std::size_t w = 0; w < n; ++w)
      if (g.directed(v, w) && --indeg[w] == 0) ready.push_back(w);
  }
  if (order.size() != n) throw InvariantViolation("directed part contains a cycle");
  return order;
}

std::vector<NodeId> topological_order(const Admg& g) {
  std::vector<NodeId> out;
  for (std::size_t i : topological_indices(g)) out.push_back(g.name(i));
  return out;
}

namespace {
NodeSet reach(const Admg& g, std::size_t start, bool forward) {
  std::vector<char> seen(g.size(), 0);
  std::vector<std::size_t> stack{start};
  NodeSet out;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w = 0; w < g.size(); ++w) {
      const bool edge = forward ? g.directed(v, w) : g.directed(w, v);
      if (edge && !seen[w]) {
        seen[w] = 1;
        out.insert(g.name(w));
        stack.push_back(w);
      }
    }
  }
  return out;
}
}  // namespace

NodeSet ancestors(const Admg& g, std::string_view n) { return reach(g, g.index(n), false); }
NodeSet descendants(const Admg& g, std::string_view n) { return reach(g, g.index(n), true); }

std::size_t shd(const Admg& g1, const Admg& g2) {
  if (g1.size() != g2.size()) throw DomainError("shd: node sets differ");
  for (const auto& n : g1.nodes())
    if (!g2.contains(n)) throw DomainError("shd: node sets differ (" + n + ")");
  std::size_t dist = 0;
  for (std::size_t i = 0; i < g1.size(); ++i)
    for (std::size_t j = i + 1; j < g1.size(); ++j) {
      const std::size_t a = g2.index(g1.name(i)), b = g2.index(g1.name(j));
      if (g1.directed(i, j) != g2.directed(a, b) || g1.directed(j, i) != g2.directed(b, a)) ++dist;
      if (g1.bidirected(i, j) != g2.bidirected(a, b)) ++dist;
    }
  return dist;
}

}  // namespace lovo
