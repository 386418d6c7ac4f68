#include <gtest/gtest.h>

#include <cmath>

#include "lovo/errors.hpp"
#include "lovo/graph.hpp"
#include "lovo/graph_json.hpp"
#include "lovo/seeds.hpp"
#include "support/enumerate.hpp"

using namespace lovo;
using lovo::testing::for_each_admg;
using lovo::testing::for_each_dag;

namespace {

Admg three(std::vector<NodePair> dir, std::vector<NodePair> bi = {}) { return Admg({"X", "Y", "Z"}, dir, bi); }

}  // namespace

TEST(Admg, RejectsInvalidInput) {
  EXPECT_THROW(Admg({"A", "A"}), DomainError);
  EXPECT_THROW(Admg({""}), DomainError);
  EXPECT_THROW(Admg({"A", "B"}, {{"A", "C"}}), DomainError);
  EXPECT_THROW(Admg({"A", "B"}, {{"A", "A"}}), DomainError);
  EXPECT_THROW(Admg({"A", "B"}, {}, {{"B", "B"}}), DomainError);
  EXPECT_THROW(Admg({"A", "B"}, {{"A", "B"}, {"B", "A"}}), InvariantViolation);
}

TEST(Admg, ConfoundedCausalLinkAllowed) {
  Admg g({"A", "B"}, {{"A", "B"}}, {{"A", "B"}});
  EXPECT_TRUE(g.has_directed("A", "B"));
  EXPECT_TRUE(g.has_bidirected("B", "A"));
  EXPECT_FALSE(g.is_dag());
  EXPECT_TRUE(g.directed_part().is_dag());
}

TEST(Admg, EqualityIgnoresNodeOrder) {
  Admg a({"A", "B", "C"}, {{"A", "B"}}, {{"B", "C"}});
  Admg b({"C", "B", "A"}, {{"A", "B"}}, {{"C", "B"}});
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == Admg({"A", "B", "C"}, {{"B", "A"}}, {{"B", "C"}}));
}

TEST(LatentProject, ChainBecomesDirectEdge) {
  Admg g({"X", "Y", "Z"}, {{"X", "Y"}, {"Y", "Z"}});
  EXPECT_EQ(latent_project(g, "Y"), Admg({"X", "Z"}, {{"X", "Z"}}));
}

TEST(LatentProject, ForkBecomesBidirected) {
  Admg g({"X", "Z1", "Z2"}, {{"X", "Z1"}, {"X", "Z2"}});
  EXPECT_EQ(latent_project(g, "X"), Admg({"Z1", "Z2"}, {}, {{"Z1", "Z2"}}));
}

TEST(LatentProject, IsolatedNodeJustDisappears) {
  Admg g({"A", "B", "C"}, {{"A", "B"}}, {{"A", "B"}});
  EXPECT_EQ(latent_project(g, "C"), Admg({"A", "B"}, {{"A", "B"}}, {{"A", "B"}}));
}

TEST(LatentProject, UnknownNodeThrows) { EXPECT_THROW(latent_project(three({}), "Q"), DomainError); }

TEST(LatentProject, ColliderThroughDroppedNodeAddsNothing) {
  Admg g({"A", "B", "D"}, {{"A", "D"}}, {{"D", "B"}});
  EXPECT_EQ(latent_project(g, "D"), Admg({"A", "B"}));
}

TEST(LatentProject, MatchesPathOracleOnAllSmallAdmgs) {
  for (std::size_t n : {3u, 4u}) {
    std::size_t checked = 0;
    for_each_admg(lovo::testing::names(n), [&](const Admg& g) {
      for (const auto& v : g.nodes()) {
        ASSERT_EQ(latent_project(g, v), lovo::testing::path_projection(g, {v}));
        ++checked;
      }
    });
    EXPECT_GT(checked, 0u);
  }
}

TEST(LatentProject, MultiNodeMatchesPathOracle) {
  for_each_admg(lovo::testing::names(4), [&](const Admg& g) {
    const auto& n = g.nodes();
    ASSERT_EQ(latent_project(g, std::vector<NodeId>{n[0], n[1]}),
              lovo::testing::path_projection(g, {n[0], n[1]}));
  });
}

TEST(LatentProject, ProjectionsCommute) {
  for_each_admg(lovo::testing::names(4), [&](const Admg& g) {
    for (const auto& v : g.nodes())
      for (const auto& w : g.nodes()) {
        if (v >= w) continue;
        ASSERT_EQ(latent_project(latent_project(g, v), w), latent_project(latent_project(g, w), v));
      }
  });
}

TEST(MoralGraph, Collider) {
  UndirectedGraph m = moral_graph(three({{"X", "Z"}, {"Y", "Z"}}));
  EXPECT_EQ(m.edges().size(), 3u);
  EXPECT_TRUE(m.has_edge("X", "Y"));
}

TEST(MoralGraph, ChainAndEmpty) {
  UndirectedGraph m = moral_graph(three({{"X", "Z"}, {"Z", "Y"}}));
  EXPECT_EQ(m.edges().size(), 2u);
  EXPECT_FALSE(m.has_edge("X", "Y"));
  EXPECT_TRUE(moral_graph(three({})).edges().empty());
  EXPECT_THROW(moral_graph(three({}, {{"X", "Y"}})), DomainError);
}

TEST(Separation, BasicCases) {
  EXPECT_TRUE(d_separated(three({{"X", "Z"}, {"Z", "Y"}}), "X", "Y", {"Z"}));
  EXPECT_TRUE(d_separated(three({{"X", "Z"}, {"Y", "Z"}}), "X", "Y", {}));
  EXPECT_FALSE(d_separated(three({{"X", "Z"}, {"Y", "Z"}}), "X", "Y", {"Z"}));
  // X -> Z with a confounded causal link Z <-> Y, Z -> Y
  Admg conf = three({{"X", "Z"}, {"Z", "Y"}}, {{"Z", "Y"}});
  EXPECT_FALSE(m_separated(conf, "X", "Y", {"Z"}));
}

TEST(Separation, ArgumentErrors) {
  Admg g = three({});
  EXPECT_THROW(d_separated(g, "X", "X", {}), DomainError);
  EXPECT_THROW(d_separated(g, "X", "Y", {"X"}), DomainError);
  EXPECT_THROW(m_separated(g, "X", "Q", {}), DomainError);
}

TEST(Separation, DAndMAgreeOnAllFourNodeDags) {
  for_each_dag(lovo::testing::names(4), [&](const Admg& g) {
    const auto& n = g.nodes();
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) {
        std::vector<NodeId> rest;
        for (std::size_t k = 0; k < 4; ++k)
          if (k != a && k != b) rest.push_back(n[k]);
        for (std::size_t mask = 0; mask < 4; ++mask) {
          NodeSet s;
          for (std::size_t k = 0; k < 2; ++k)
            if (mask & (1u << k)) s.insert(rest[k]);
          ASSERT_EQ(d_separated(g, n[a], n[b], s), m_separated(g, n[a], n[b], s));
        }
      }
  });
}

TEST(Separation, MatchesPathEnumeration) {
  Rng rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    GraphGenConfig cfg{5, 0.5, 0.0, rng()};
    Admg dag = generate_er_dag(cfg);
    GraphGenConfig cfg4{4, 0.5, 0.4, rng()};
    Admg admg = generate_er_admg(cfg4);
    for (const Admg* g : {&dag, &admg}) {
      const auto& n = g->nodes();
      for (std::size_t a = 0; a < n.size(); ++a)
        for (std::size_t b = a + 1; b < n.size(); ++b) {
          std::vector<NodeId> rest;
          for (std::size_t k = 0; k < n.size(); ++k)
            if (k != a && k != b) rest.push_back(n[k]);
          for (std::size_t mask = 0; mask < (1u << rest.size()); ++mask) {
            NodeSet s;
            for (std::size_t k = 0; k < rest.size(); ++k)
              if (mask & (1u << k)) s.insert(rest[k]);
            const bool oracle = lovo::testing::path_separated(*g, n[a], n[b], s);
            ASSERT_EQ(m_separated(*g, n[a], n[b], s), oracle);
            if (g->is_dag()) ASSERT_EQ(d_separated(*g, n[a], n[b], s), oracle);
          }
        }
    }
  }
}

TEST(Generators, DegenerateProbabilities) {
  EXPECT_EQ(generate_er_dag({6, 0.0, 0.0, 1}).directed_count(), 0u);
  EXPECT_EQ(generate_er_dag({6, 1.0, 0.0, 1}).directed_count(), 15u);
  EXPECT_TRUE(generate_er_admg({6, 0.3, 0.0, 3}).is_dag());
  EXPECT_THROW(generate_er_dag({6, 1.5, 0.0, 1}), DomainError);
  EXPECT_THROW(generate_er_dag({0, 0.5, 0.0, 1}), DomainError);
}

TEST(Generators, Deterministic) {
  EXPECT_EQ(generate_er_admg({10, 0.3, 0.2, 42}), generate_er_admg({10, 0.3, 0.2, 42}));
}

TEST(Generators, AbsentPairCountMatchesExpectation) {
  for (double p : {0.1, 0.3, 0.7}) {
    double sum = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) sum += double(generate_er_dag({10, p, 0.0, derive_seed(5, {std::uint64_t(r)})}).directed_count());
    const double mean = sum / reps;
    const double expected = p * 45.0;
    const double sd = std::sqrt(45.0 * p * (1 - p) / reps);
    EXPECT_NEAR(mean, expected, 4 * sd) << "p=" << p;
  }
}

TEST(Generators, UnlinkedPairsInAdmg) {
  const double p = 0.3, q = 0.1;
  double sum = 0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    Admg g = generate_er_admg({10, p, q, derive_seed(9, {std::uint64_t(r)})});
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = i + 1; j < 10; ++j)
        if (!g.adjacent(i, j)) sum += 1;
  }
  const double pr = (1 - p) * (1 - q);
  EXPECT_NEAR(sum / reps, pr * 45.0, 4 * std::sqrt(45.0 * pr * (1 - pr) / reps));
}

TEST(Shd, Conventions) {
  Admg a({"X", "Y"}, {{"X", "Y"}});
  EXPECT_EQ(shd(a, a), 0u);
  EXPECT_EQ(shd(a, Admg({"X", "Y"}, {{"Y", "X"}})), 1u);
  EXPECT_EQ(shd(a, Admg({"X", "Y"}, {}, {{"X", "Y"}})), 2u);
  EXPECT_THROW(shd(a, Admg({"X", "Q"})), DomainError);
}

TEST(Shd, RecountAndMetricAxioms) {
  Rng rng(11);
  auto recount = [](const Admg& g1, const Admg& g2) {
    std::set<NodePair> d1, d2, b1, b2;
    for (auto e : g1.directed_edges()) d1.insert(e);
    for (auto e : g2.directed_edges()) d2.insert(e);
    for (auto [a, b] : g1.bidirected_edges()) b1.insert(std::minmax(a, b));
    for (auto [a, b] : g2.bidirected_edges()) b2.insert(std::minmax(a, b));
    std::size_t count = 0;
    const auto& n = g1.nodes();
    for (std::size_t i = 0; i < n.size(); ++i)
      for (std::size_t j = i + 1; j < n.size(); ++j) {
        NodePair f{n[i], n[j]}, r{n[j], n[i]};
        if ((d1.count(f) != d2.count(f)) || (d1.count(r) != d2.count(r))) ++count;
        if (b1.count(std::minmax(n[i], n[j])) != b2.count(std::minmax(n[i], n[j]))) ++count;
      }
    return count;
  };
  for (int r = 0; r < 300; ++r) {
    Admg a = generate_er_admg({6, 0.4, 0.2, rng()});
    Admg b = generate_er_admg({6, 0.4, 0.2, rng()});
    Admg c = generate_er_admg({6, 0.4, 0.2, rng()});
    ASSERT_EQ(shd(a, b), recount(a, b));
    ASSERT_EQ(shd(a, b), shd(b, a));
    ASSERT_LE(shd(a, c), shd(a, b) + shd(b, c));
    ASSERT_EQ(shd(a, b) == 0, a == b);
  }
}

TEST(Closure, ChainAndEmpty) {
  Admg chain = three({{"X", "Z"}, {"Z", "Y"}});
  EXPECT_EQ(descendants(chain, "X"), (NodeSet{"Y", "Z"}));
  EXPECT_EQ(ancestors(chain, "Y"), (NodeSet{"X", "Z"}));
  const Admg empty = three({});
  for (const auto& n : empty.nodes()) EXPECT_TRUE(ancestors(empty, n).empty());
}

TEST(Closure, MatchesNaiveClosure) {
  Rng rng(3);
  for (int r = 0; r < 200; ++r) {
    Admg g = generate_er_dag({8, 0.35, 0.0, rng()});
    const auto reach = lovo::testing::naive_closure(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      NodeSet de, an;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (reach[i][j]) de.insert(g.name(j));
        if (reach[j][i]) an.insert(g.name(j));
      }
      ASSERT_EQ(descendants(g, g.name(i)), de);
      ASSERT_EQ(ancestors(g, g.name(i)), an);
    }
    const auto order = topological_order(g);
    for (std::size_t a = 0; a < order.size(); ++a)
      for (std::size_t b = a + 1; b < order.size(); ++b) ASSERT_FALSE(g.has_directed(order[b], order[a]));
  }
}

TEST(GraphJson, RoundTripAndStrictness) {
  Admg g({"X", "Y", "Z1"}, {{"X", "Z1"}}, {{"Y", "Z1"}});
  EXPECT_EQ(graph_from_json(graph_to_json(g)), g);
  EXPECT_EQ(graph_to_json(g).dump(),
            R"({"bidirected":[["Y","Z1"]],"directed":[["X","Z1"]],"nodes":["X","Y","Z1"]})");
  auto j = graph_to_json(g);
  j["extra"] = 1;
  EXPECT_THROW(graph_from_json(j), DomainError);
  auto k = graph_to_json(g);
  k["convention"] = "no-confounded-links";
  EXPECT_EQ(graph_document_from_json(k).convention, GraphConvention::NoConfoundedLinks);
  k["convention"] = "something";
  EXPECT_THROW(graph_document_from_json(k), DomainError);
}
