#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lovo/graph.hpp"

namespace lovo {

enum class Verdict { Absent, DirectedXtoY, DirectedYtoX, Undecidable };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

/// One rule that fired. `lemma` numbers follow the three exclusion rules:
/// 2 = child/sibling exclusion on ADMGs, 3 = directed-part exclusion,
/// 4 = DAG edge-type rule. Conditions are short kebab-case labels.
struct RuleFiring {
  int lemma = 0;
  std::string condition;
  std::string witness;

  friend bool operator==(const RuleFiring&, const RuleFiring&) = default;
};

struct EdgeDecision {
  Verdict verdict = Verdict::Undecidable;
  std::vector<RuleFiring> trace;
};

nlohmann::json decision_to_json(const EdgeDecision& d);
EdgeDecision decision_from_json(const nlohmann::json& j);

enum class AdjustmentProvenance { UnionOfParents, Full, Random };

struct AdjustmentSet {
  NodeSet members;
  AdjustmentProvenance provenance = AdjustmentProvenance::UnionOfParents;
};

std::string_view to_string(AdjustmentProvenance p);

/// The two leave-one-out graphs: gx over {x} ∪ Z, gy over {y} ∪ Z.
struct MarginalPair {
  Admg gx;
  Admg gy;
  NodeId x;
  NodeId y;

  /// Throws DomainError unless the node sets have the required shape.
  void validate() const;
  /// Z, in gx node order.
  std::vector<NodeId> shared() const;
  /// Roles of x and y exchanged.
  MarginalPair swapped() const;
};

/// Projects `joint` onto the two leave-one-out node sets.
MarginalPair marginals_of(const Admg& joint, const NodeId& x, const NodeId& y);

/// Child/sibling exclusion on ADMGs. Never orients.
EdgeDecision exclude_link_admg(const MarginalPair& mp);

/// Exclusion from the directed parts only. Absent requires `joint_is_dag` and
/// both directions excluded; otherwise the trace records the excluded
/// direction(s) and the verdict stays Undecidable.
EdgeDecision exclude_link_directed(const MarginalPair& mp, bool joint_is_dag = true);

/// Edge-type rule for DAG joints, reading the sibling test in G_Y and the
/// child-count test in G_X (the only graphs that contain the tested node).
EdgeDecision classify_edge_dag(const MarginalPair& mp);

enum class NoConfoundedLinksRule { ChildSibling, DagEdgeType };

/// For marginals in which bidirected edges replace confounded causal links:
/// Absent verdicts are demoted to Undecidable when x or y has a sibling.
EdgeDecision classify_edge_admg_no_confounded_links(
    const MarginalPair& mp, NoConfoundedLinksRule rule = NoConfoundedLinksRule::ChildSibling);

/// pa_{G_X}(x) ∪ pa_{G_Y}(y). Requires an Absent decision (PreconditionError
/// otherwise); throws AbstainError(ConfoundedParent) when a parent also
/// shares a bidirected edge with its child.
AdjustmentSet union_of_parents(const MarginalPair& mp, const EdgeDecision& decision);

struct JointReconstruction {
  /// Number of distinct DAGs found, capped at 2 (2 means "at least two").
  std::size_t count = 0;
  /// First consistent DAG found, if any.
  std::optional<Admg> graph;
};

/// All joint DAGs over {x, y} ∪ Z with the decided x–y edge whose latent
/// projections reproduce gx and gy, stopping after the second one.
JointReconstruction enumerate_joint_dags(const MarginalPair& mp, Verdict verdict);

/// The unique joint DAG, or AbstainError(AmbiguousJoint / InconsistentJoint).
/// PreconditionError when the decision is Undecidable.
Admg reconstruct_joint_directed(const MarginalPair& mp, const EdgeDecision& decision);

}  // namespace lovo
