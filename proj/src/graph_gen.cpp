#include <algorithm>
#include <numeric>
#include <random>

#include "lovo/errors.hpp"
#include "lovo/graph.hpp"
#include "lovo/seeds.hpp"

namespace lovo {

std::vector<NodeId> default_node_names(std::size_t d) {
  std::vector<NodeId> names;
  names.reserve(d);
  for (std::size_t i = 1; i <= d; ++i) names.push_back("V" + std::to_string(i));
  return names;
}

namespace {

void check_config(const GraphGenConfig& cfg) {
  if (cfg.node_count == 0) throw DomainError("node_count must be positive");
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw DomainError("p must lie in [0,1]");
  if (!(cfg.q >= 0.0 && cfg.q <= 1.0)) throw DomainError("q must lie in [0,1]");
}

AdmgBuilder random_order_dag(const GraphGenConfig& cfg, Rng& rng) {
  const std::size_t d = cfg.node_count;
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  AdmgBuilder b(default_node_names(d));
  std::bernoulli_distribution edge(cfg.p);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (edge(rng)) b.add_directed(order[i], order[j]);
  return b;
}

}  // namespace

Admg generate_er_dag(const GraphGenConfig& cfg) {
  check_config(cfg);
  Rng rng(cfg.seed);
  return random_order_dag(cfg, rng).build();
}

Admg generate_er_admg(const GraphGenConfig& cfg) {
  check_config(cfg);
  Rng rng(cfg.seed);
  AdmgBuilder b = random_order_dag(cfg, rng);
  std::bernoulli_distribution conf(cfg.q);
  for (std::size_t i = 0; i < cfg.node_count; ++i)
    for (std::size_t j = i + 1; j < cfg.node_count; ++j)
      if (conf(rng)) b.add_bidirected(i, j);
  return b.build();
}

}  // namespace lovo
