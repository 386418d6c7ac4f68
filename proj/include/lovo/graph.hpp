#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lovo {

using NodeId = std::string;
using NodeSet = std::set<NodeId>;
using NodePair = std::pair<NodeId, NodeId>;

class AdmgBuilder;

/// Acyclic directed mixed graph over named nodes.
///
/// Directed edges encode causation, bidirected edges hidden confounding. A pair
/// may carry both (a confounded causal link). Values are immutable once built;
/// every constructor validates names, endpoints, self-loops and acyclicity of
/// the directed part. A DAG is an Admg without bidirected edges.
class Admg {
 public:
  Admg() = default;
  explicit Admg(std::vector<NodeId> nodes, const std::vector<NodePair>& directed = {},
                const std::vector<NodePair>& bidirected = {});

  std::size_t size() const { return nodes_.size(); }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const NodeId& name(std::size_t i) const { return nodes_[i]; }
  bool contains(std::string_view n) const { return index_.find(n) != index_.end(); }
  /// Throws DomainError for unknown names.
  std::size_t index(std::string_view n) const;

  bool directed(std::size_t from, std::size_t to) const { return dir_[from * size() + to] != 0; }
  bool bidirected(std::size_t a, std::size_t b) const { return bi_[a * size() + b] != 0; }
  bool adjacent(std::size_t a, std::size_t b) const {
    return directed(a, b) || directed(b, a) || bidirected(a, b);
  }
  bool has_directed(std::string_view from, std::string_view to) const;
  bool has_bidirected(std::string_view a, std::string_view b) const;

  std::vector<std::size_t> parent_indices(std::size_t i) const;
  std::vector<std::size_t> child_indices(std::size_t i) const;
  std::vector<std::size_t> sibling_indices(std::size_t i) const;
  NodeSet parents(std::string_view n) const;
  NodeSet children(std::string_view n) const;
  NodeSet siblings(std::string_view n) const;

  /// Edges listed in node order; bidirected pairs have the earlier node first.
  std::vector<NodePair> directed_edges() const;
  std::vector<NodePair> bidirected_edges() const;
  std::size_t directed_count() const;
  std::size_t bidirected_count() const;
  bool is_dag() const { return bidirected_count() == 0; }

  /// Same nodes, bidirected edges dropped.
  Admg directed_part() const;

  /// Name-based equality: node order is irrelevant.
  friend bool operator==(const Admg& a, const Admg& b);

 private:
  friend class AdmgBuilder;
  void validate() const;

  std::vector<NodeId> nodes_;
  std::map<NodeId, std::size_t, std::less<>> index_;
  std::vector<std::uint8_t> dir_;
  std::vector<std::uint8_t> bi_;
};

/// Mutable staging area used by generators and projections. build() runs the
/// same validation as the Admg constructor.
class AdmgBuilder {
 public:
  explicit AdmgBuilder(std::vector<NodeId> nodes);
  explicit AdmgBuilder(const Admg& g);

  std::size_t size() const { return g_.size(); }
  std::size_t index(std::string_view n) const { return g_.index(n); }
  bool directed(std::size_t from, std::size_t to) const { return g_.directed(from, to); }
  bool bidirected(std::size_t a, std::size_t b) const { return g_.bidirected(a, b); }

  AdmgBuilder& add_directed(std::size_t from, std::size_t to);
  AdmgBuilder& remove_directed(std::size_t from, std::size_t to);
  AdmgBuilder& add_bidirected(std::size_t a, std::size_t b);
  AdmgBuilder& remove_bidirected(std::size_t a, std::size_t b);
  AdmgBuilder& add_directed(std::string_view from, std::string_view to);
  AdmgBuilder& add_bidirected(std::string_view a, std::string_view b);

  /// True if adding from->to would close a directed cycle.
  bool creates_cycle(std::size_t from, std::size_t to) const;

  Admg build() const;

 private:
  Admg g_;
};

class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  UndirectedGraph(std::vector<NodeId> nodes, const std::vector<NodePair>& edges);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  bool has_edge(std::string_view a, std::string_view b) const;
  /// Each edge once, ordered pair (smaller, larger) lexicographically.
  const std::set<NodePair>& edges() const { return edges_; }
  NodeSet neighbors(std::string_view n) const;

  friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

 private:
  std::vector<NodeId> nodes_;
  std::set<NodePair> edges_;
};

struct GraphGenConfig {
  std::size_t node_count = 10;
  double p = 0.3;
  double q = 0.0;
  std::uint64_t seed = 0;
};

/// Marginal ADMG after removing `drop`.
Admg latent_project(const Admg& g, std::string_view drop);
/// Iterated single-node projection (order independent).
Admg latent_project(const Admg& g, const std::vector<NodeId>& drops);

UndirectedGraph moral_graph(const Admg& dag);

/// d-separation in a DAG, decided on the moralized ancestral graph.
bool d_separated(const Admg& dag, std::string_view a, std::string_view b, const NodeSet& given);
/// m-separation in an ADMG, decided by reachability over mixed paths.
bool m_separated(const Admg& g, std::string_view a, std::string_view b, const NodeSet& given);

/// Node names are "V1".."Vd".
std::vector<NodeId> default_node_names(std::size_t d);
Admg generate_er_dag(const GraphGenConfig& cfg);
Admg generate_er_admg(const GraphGenConfig& cfg);

/// Structural Hamming distance over per-pair edge records (directed part with
/// orientation, bidirected part). One unit per differing component.
std::size_t shd(const Admg& g1, const Admg& g2);

NodeSet ancestors(const Admg& g, std::string_view n);
NodeSet descendants(const Admg& g, std::string_view n);
std::vector<NodeId> topological_order(const Admg& g);
std::vector<std::size_t> topological_indices(const Admg& g);

}  // namespace lovo
