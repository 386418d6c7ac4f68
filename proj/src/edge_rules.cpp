#include "lovo/edge_rules.hpp"

#include <algorithm>
#include <array>
#include <iterator>

#include "lovo/errors.hpp"

namespace lovo {

using nlohmann::json;

namespace {

bool subset_of(const NodeSet& a, const NodeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

NodeSet unite(const NodeSet& a, const NodeSet& b) {
  NodeSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

std::string join(const NodeSet& s) {
  std::string out;
  for (const auto& n : s) {
    if (!out.empty()) out += ',';
    out += n;
  }
  return out;
}


// Lemma 2, one direction: a child of x in G_X that is neither child nor sibling of y in G_Y.
std::optional<NodeId> child_sibling_witness(const MarginalPair& mp) {
  const NodeSet ch_y = mp.gy.children(mp.y);
  const NodeSet sib_y = mp.gy.siblings(mp.y);
  for (const auto& c : mp.gx.children(mp.x))
    if (!ch_y.count(c) && !sib_y.count(c)) return c;
  return std::nullopt;
}

// Lemma 3 conditions excluding x -> y, in order (1), (2), (3).
std::optional<RuleFiring> directed_exclusion(const MarginalPair& mp) {
  const Admg dx = mp.gx.directed_part();
  const Admg dy = mp.gy.directed_part();
  const NodeSet an_x = ancestors(dx, mp.x);
  const NodeSet de_y = descendants(dy, mp.y);
  for (const auto& a : an_x)
    if (de_y.count(a)) return RuleFiring{3, "ancestor-of-x-descends-from-y", a};
  const NodeSet pa_y = dy.parents(mp.y);
  for (const auto& p : dx.parents(mp.x))
    if (!pa_y.count(p)) return RuleFiring{3, "parent-of-x-not-parent-of-y", p};
  const NodeSet ch_x = dx.children(mp.x);
  for (const auto& c : dy.children(mp.y))
    if (!ch_x.count(c)) return RuleFiring{3, "child-of-y-not-child-of-x", c};
  return std::nullopt;
}

// Tri-state result of the DAG edge-type rule for x -> y.
enum class Tri { Unknown, True, False };

struct DirectionalFinding {
  Tri forward = Tri::Unknown;   // x -> y
  Tri backward = Tri::Unknown;  // y -> x
  std::vector<RuleFiring> trace;
};

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Absent:
      return "Absent";
    case Verdict::DirectedXtoY:
      return "DirectedXtoY";
    case Verdict::DirectedYtoX:
      return "DirectedYtoX";
    case Verdict::Undecidable:
      return "Undecidable";
  }
  return "Undecidable";
}

Verdict verdict_from_string(std::string_view s) {
  for (Verdict v : {Verdict::Absent, Verdict::DirectedXtoY, Verdict::DirectedYtoX, Verdict::Undecidable})
    if (to_string(v) == s) return v;
  throw DomainError("unknown verdict: " + std::string(s));
}

std::string_view to_string(AdjustmentProvenance p) {
  switch (p) {
    case AdjustmentProvenance::UnionOfParents:
      return "UnionOfParents";
    case AdjustmentProvenance::Full:
      return "Full";
    case AdjustmentProvenance::Random:
      return "Random";
  }
  return "UnionOfParents";
}

json decision_to_json(const EdgeDecision& d) {
  json j;
  j["verdict"] = std::string(to_string(d.verdict));
  j["trace"] = json::array();
  for (const auto& f : d.trace) j["trace"].push_back({{"lemma", f.lemma}, {"condition", f.condition}, {"witness", f.witness}});
  return j;
}

EdgeDecision decision_from_json(const json& j) {
  EdgeDecision d;
  d.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  for (const json& f : j.at("trace"))
    d.trace.push_back({f.at("lemma").get<int>(), f.at("condition").get<std::string>(),
                       f.value("witness", std::string())});
  return d;
}

// ---------------------------------------------------------------------------

void MarginalPair::validate() const {
  if (x == y) throw DomainError("x and y must differ");
  if (!gx.contains(x)) throw DomainError("gx does not contain " + x);
  if (!gy.contains(y)) throw DomainError("gy does not contain " + y);
  if (gx.contains(y)) throw DomainError("gx must not contain " + y);
  if (gy.contains(x)) throw DomainError("gy must not contain " + x);
  if (gx.size() != gy.size()) throw DomainError("gx and gy must share the same Z");
  for (const auto& n : gx.nodes())
    if (n != x && !gy.contains(n)) throw DomainError("node " + n + " missing from gy");
}

std::vector<NodeId> MarginalPair::shared() const {
  std::vector<NodeId> z;
  for (const auto& n : gx.nodes())
    if (n != x) z.push_back(n);
  return z;
}

MarginalPair MarginalPair::swapped() const { return MarginalPair{gy, gx, y, x}; }

MarginalPair marginals_of(const Admg& joint, const NodeId& x, const NodeId& y) {
  if (x == y) throw DomainError("x and y must differ");
  MarginalPair mp{latent_project(joint, y), latent_project(joint, x), x, y};
  return mp;
}

// ---------------------------------------------------------------------------

EdgeDecision exclude_link_admg(const MarginalPair& mp) {
  mp.validate();
  EdgeDecision d;
  if (auto w = child_sibling_witness(mp)) {
    d.trace.push_back({2, "child-of-x-not-child-or-sibling-of-y", *w});
  } else if (auto w2 = child_sibling_witness(mp.swapped())) {
    d.trace.push_back({2, "child-of-y-not-child-or-sibling-of-x", *w2});
  }
  d.verdict = d.trace.empty() ? Verdict::Undecidable : Verdict::Absent;
  return d;
}

EdgeDecision exclude_link_directed(const MarginalPair& mp, bool joint_is_dag) {
  mp.validate();
  EdgeDecision d;
  auto fwd = directed_exclusion(mp);
  auto bwd = directed_exclusion(mp.swapped());
  if (fwd) {
    fwd->condition = "excludes-x-to-y:" + fwd->condition;
    d.trace.push_back(*fwd);
  }
  if (bwd) {
    bwd->condition = "excludes-y-to-x:" + bwd->condition;
    d.trace.push_back(*bwd);
  }
  d.verdict = (joint_is_dag && fwd && bwd) ? Verdict::Absent : Verdict::Undecidable;
  return d;
}

namespace {

// Case (3) of the DAG rule: neither x nor y has two or more children.
DirectionalFinding few_children_case(const MarginalPair& mp) {
  DirectionalFinding f;
  const NodeSet ch_x = mp.gx.children(mp.x);
  const NodeSet ch_y = mp.gy.children(mp.y);
  if (ch_x != ch_y) {
    f.forward = f.backward = Tri::False;
    f.trace.push_back({4, "children-differ", join(ch_x) + "|" + join(ch_y)});
    return f;
  }
  const NodeSet pa_x = mp.gx.parents(mp.x);
  const NodeSet pa_y = mp.gy.parents(mp.y);
  if (!subset_of(pa_x, pa_y) && !subset_of(pa_y, pa_x)) {
    f.forward = f.backward = Tri::False;
    f.trace.push_back({4, "parents-incomparable", join(pa_x) + "|" + join(pa_y)});
    return f;
  }
  if (ch_x.size() != 1) return f;  // no children on either side: undecidable
  const NodeId& c = *ch_x.begin();
  NodeSet pa_c_x = mp.gx.parents(c);
  NodeSet pa_c_y = mp.gy.parents(c);
  pa_c_x.erase(mp.x);
  pa_c_y.erase(mp.y);
  // Possible local structures: chain x -> y -> c, chain y -> x -> c, collider
  // x -> c <- y. With P, Q, R the Z-parents of x, y, c in the joint, each one
  // fixes pa(x), pa(y) and the Z-parents of c in both marginals:
  //   x -> y -> c:  pa_x = P,    pa_y = P ∪ Q,  c_x = R ∪ Q,  c_y = R
  //   x -> c <- y:  pa_x = P,    pa_y = Q,      c_x = R ∪ Q,  c_y = R ∪ P
  // A structure fits iff suitable P, Q, R exist. The containment tests on
  // pa_x, pa_y alone are not enough when x and y share a parent.
  auto minus = [](const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
  };
  auto chain_fits = [&](const NodeSet& pa_first, const NodeSet& pa_second, const NodeSet& c_first,
                        const NodeSet& c_second) {
    return subset_of(pa_first, pa_second) && subset_of(c_second, c_first) &&
           subset_of(minus(c_first, c_second), pa_second) && subset_of(minus(pa_second, pa_first), c_first);
  };
  const bool chain_xy = chain_fits(pa_x, pa_y, pa_c_x, pa_c_y);
  const bool chain_yx = chain_fits(pa_y, pa_x, pa_c_y, pa_c_x);
  const bool collider = subset_of(pa_y, pa_c_x) && subset_of(pa_x, pa_c_y) &&
                        subset_of(minus(pa_c_x, pa_y), pa_c_y) && subset_of(minus(pa_c_y, pa_x), pa_c_x);
  if (!chain_xy && !chain_yx) {
    f.forward = f.backward = Tri::False;
    f.trace.push_back({4, "no-chain-through-common-child", c});
    return f;
  }
  if (!chain_yx && !collider) {
    f.forward = Tri::True;
    f.backward = Tri::False;
    f.trace.push_back({4, "only-chain-x-y-fits", c});
  } else if (!chain_xy && !collider) {
    f.forward = Tri::False;
    f.backward = Tri::True;
    f.trace.push_back({4, "only-chain-y-x-fits", c});
  }
  return f;
}

}  // namespace

EdgeDecision classify_edge_dag(const MarginalPair& mp) {
  mp.validate();
  // x has >= 2 children in the joint iff G_Y has a bidirected edge; likewise y.
  const bool many_x = mp.gy.bidirected_count() > 0;
  const bool many_y = mp.gx.bidirected_count() > 0;
  DirectionalFinding f;
  if (many_x || many_y) {
    if (many_x) {
      const NodeSet sib = mp.gy.siblings(mp.y);
      f.forward = sib.empty() ? Tri::False : Tri::True;
      f.trace.push_back({4, sib.empty() ? "x-many-children-y-no-sibling" : "x-many-children-y-has-sibling",
                         join(sib)});
    } else {
      const NodeSet ch = mp.gx.children(mp.x);
      f.forward = ch.size() >= 2 ? Tri::True : Tri::False;
      f.trace.push_back({4, ch.size() >= 2 ? "y-many-children-x-many-children-in-gx"
                                           : "y-many-children-x-few-children-in-gx",
                         join(ch)});
    }
    if (many_y) {
      const NodeSet sib = mp.gx.siblings(mp.x);
      f.backward = sib.empty() ? Tri::False : Tri::True;
      f.trace.push_back({4, sib.empty() ? "y-many-children-x-no-sibling" : "y-many-children-x-has-sibling",
                         join(sib)});
    } else {
      const NodeSet ch = mp.gy.children(mp.y);
      f.backward = ch.size() >= 2 ? Tri::True : Tri::False;
      f.trace.push_back({4, ch.size() >= 2 ? "x-many-children-y-many-children-in-gy"
                                           : "x-many-children-y-few-children-in-gy",
                         join(ch)});
    }
  } else {
    f = few_children_case(mp);
  }

  EdgeDecision d;
  if (f.forward == Tri::True && f.backward == Tri::True) {
    d.trace = std::move(f.trace);
    d.trace.push_back({4, "contradictory-directions", ""});
    d.verdict = Verdict::Undecidable;
    return d;
  }
  if (f.forward == Tri::True)
    d.verdict = Verdict::DirectedXtoY;
  else if (f.backward == Tri::True)
    d.verdict = Verdict::DirectedYtoX;
  else if (f.forward == Tri::False && f.backward == Tri::False)
    d.verdict = Verdict::Absent;
  else
    d.verdict = Verdict::Undecidable;
  if (d.verdict != Verdict::Undecidable) d.trace = std::move(f.trace);
  return d;
}

EdgeDecision classify_edge_admg_no_confounded_links(const MarginalPair& mp, NoConfoundedLinksRule rule) {
  EdgeDecision d = rule == NoConfoundedLinksRule::ChildSibling ? exclude_link_admg(mp) : classify_edge_dag(mp);
  if (d.verdict != Verdict::Absent) return d;
  const NodeSet sx = mp.gx.siblings(mp.x);
  const NodeSet sy = mp.gy.siblings(mp.y);
  if (!sx.empty() || !sy.empty()) {
    d.verdict = Verdict::Undecidable;
    d.trace.push_back({2, "sibling-may-hide-parent", join(unite(sx, sy))});
  }
  return d;
}

AdjustmentSet union_of_parents(const MarginalPair& mp, const EdgeDecision& decision) {
  if (decision.verdict != Verdict::Absent)
    throw PreconditionError("union_of_parents requires an Absent decision");
  mp.validate();
  AdjustmentSet out;
  out.provenance = AdjustmentProvenance::UnionOfParents;
  auto collect = [&](const Admg& g, const NodeId& v) {
    for (const auto& p : g.parents(v)) {
      if (g.has_bidirected(p, v))
        throw AbstainError(Abstained{AbstainReason::ConfoundedParent, p + " is confounded with " + v});
      out.members.insert(p);
    }
  };
  collect(mp.gx, mp.x);
  collect(mp.gy, mp.y);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Ordered-pair status of a Z–Z pair in the joint: 0 none, 1 a->b, 2 b->a.
using PairOptions = std::vector<int>;

struct Skeleton {
  NodeSet pa_x, ch_x, pa_y, ch_y;
  bool x_to_y = false;
};

}  // namespace

JointReconstruction enumerate_joint_dags(const MarginalPair& mp, Verdict verdict) {
  mp.validate();
  if (verdict == Verdict::Undecidable) throw PreconditionError("reconstruction needs a decided edge");
  if (verdict == Verdict::DirectedYtoX) return enumerate_joint_dags(mp.swapped(), Verdict::DirectedXtoY);

  const std::vector<NodeId> z = mp.shared();
  std::vector<NodeId> nodes = mp.gx.nodes();
  nodes.push_back(mp.y);

  // The x/y neighbourhoods that do not depend on open choices.
  NodeSet pa_x = mp.gx.parents(mp.x);
  NodeSet ch_x, ch_y = mp.gy.children(mp.y), pa_y_certain;
  std::vector<NodeId> pa_y_open;
  const bool x_to_y = verdict == Verdict::DirectedXtoY;
  if (x_to_y) {
    ch_x = mp.gy.siblings(mp.y);
    for (const auto& p : mp.gy.parents(mp.y)) {
      if (pa_x.count(p))
        pa_y_open.push_back(p);
      else
        pa_y_certain.insert(p);
    }
  } else {
    ch_x = mp.gx.children(mp.x);
    pa_y_certain = mp.gy.parents(mp.y);
  }

  JointReconstruction result;
  constexpr std::size_t kMaxCandidates = 1u << 16;
  std::size_t tried = 0;
  const std::size_t subsets = std::size_t{1} << pa_y_open.size();

  for (std::size_t mask = 0; mask < subsets && result.count < 2; ++mask) {
    NodeSet pa_y = pa_y_certain;
    for (std::size_t k = 0; k < pa_y_open.size(); ++k)
      if (mask & (std::size_t{1} << k)) pa_y.insert(pa_y_open[k]);

    auto via_y = [&](const NodeId& a, const NodeId& b) { return pa_y.count(a) && ch_y.count(b); };
    auto via_x = [&](const NodeId& a, const NodeId& b) { return pa_x.count(a) && ch_x.count(b); };

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<PairOptions> options;
    bool feasible = true;
    for (std::size_t i = 0; i < z.size() && feasible; ++i)
      for (std::size_t j = i + 1; j < z.size() && feasible; ++j) {
        const NodeId &a = z[i], &b = z[j];
        PairOptions opts;
        for (int state = 0; state < 3; ++state) {
          const bool ab = state == 1, ba = state == 2;
          const bool ok = mp.gx.has_directed(a, b) == (ab || via_y(a, b)) &&
                          mp.gx.has_directed(b, a) == (ba || via_y(b, a)) &&
                          mp.gy.has_directed(a, b) == (ab || via_x(a, b)) &&
                          mp.gy.has_directed(b, a) == (ba || via_x(b, a));
          if (ok) opts.push_back(state);
        }
        if (opts.empty()) feasible = false;
        pairs.emplace_back(i, j);
        options.push_back(std::move(opts));
      }
    if (!feasible) continue;

    std::vector<std::size_t> pick(options.size(), 0);
    while (result.count < 2) {
      if (++tried > kMaxCandidates) {
        // too many open choices to certify uniqueness
        result.count = 2;
        break;
      }
      AdmgBuilder b(nodes);
      for (const auto& p : pa_x) b.add_directed(p, mp.x);
      for (const auto& c : ch_x) b.add_directed(mp.x, c);
      for (const auto& p : pa_y) b.add_directed(p, mp.y);
      for (const auto& c : ch_y) b.add_directed(mp.y, c);
      if (x_to_y) b.add_directed(mp.x, mp.y);
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const int state = options[k][pick[k]];
        if (state == 1) b.add_directed(z[pairs[k].first], z[pairs[k].second]);
        if (state == 2) b.add_directed(z[pairs[k].second], z[pairs[k].first]);
      }
      try {
        Admg g = b.build();
        if (latent_project(g, mp.y) == mp.gx && latent_project(g, mp.x) == mp.gy) {
          if (result.count == 0) result.graph = g;
          ++result.count;
        }
      } catch (const InvariantViolation&) {
        // cyclic candidate
      }
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }
  return result;
}

Admg reconstruct_joint_directed(const MarginalPair& mp, const EdgeDecision& decision) {
  if (decision.verdict == Verdict::Undecidable)
    throw PreconditionError("reconstruct_joint_directed requires a decided edge");
  JointReconstruction r = enumerate_joint_dags(mp, decision.verdict);
  if (r.count == 0)
    throw AbstainError(Abstained{AbstainReason::InconsistentJoint, "no joint DAG projects onto both marginals"});
  if (r.count > 1)
    throw AbstainError(Abstained{AbstainReason::AmbiguousJoint, "several joint DAGs project onto both marginals"});
  return *r.graph;
}

}  // namespace lovo
