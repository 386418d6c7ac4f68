#include "lovo/scm.hpp"

#include <cmath>
#include <random>

#include "lovo/errors.hpp"
#include "lovo/graph_json.hpp"

namespace lovo {

using nlohmann::json;

double NoiseSpec::variance() const {
  switch (kind) {
    case Kind::UniformSymmetric:
      return param * param / 3.0;
    case Kind::ShiftedExponential:
      return 1.0 / (param * param);
  }
  return 0;
}

double NoiseSpec::sample(Rng& rng) const {
  switch (kind) {
    case Kind::UniformSymmetric:
      return std::uniform_real_distribution<double>(-param, param)(rng);
    case Kind::ShiftedExponential:
      return std::exponential_distribution<double>(param)(rng) - 1.0 / param;
  }
  return 0;
}

LinearScm::LinearScm(Admg graph, Eigen::MatrixXd lambda, std::vector<NoiseSpec> noise)
    : graph_(std::move(graph)), lambda_(std::move(lambda)), noise_(std::move(noise)) {
  const auto d = static_cast<Eigen::Index>(graph_.size());
  if (!graph_.is_dag()) throw DomainError("linear SCM needs a DAG");
  if (lambda_.rows() != d || lambda_.cols() != d) throw DomainError("lambda has wrong shape");
  if (noise_.size() != graph_.size()) throw DomainError("one noise spec per node required");
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const bool edge = graph_.directed(j, i);
      if (!edge && lambda_(i, j) != 0.0)
        throw DomainError("lambda(" + graph_.name(i) + "," + graph_.name(j) + ") set without an edge");
      if (edge && lambda_(i, j) == 0.0)
        throw DomainError("edge " + graph_.name(j) + "->" + graph_.name(i) + " has zero coefficient");
    }
  for (const auto& n : noise_)
    if (!(n.param > 0) || !std::isfinite(n.param)) throw DomainError("noise parameter must be positive");
}

double LinearScm::coefficient(std::string_view child, std::string_view parent) const {
  return lambda_(graph_.index(child), graph_.index(parent));
}

Eigen::VectorXd LinearScm::noise_variances() const {
  Eigen::VectorXd v(noise_.size());
  for (std::size_t i = 0; i < noise_.size(); ++i) v(i) = noise_[i].variance();
  return v;
}

namespace {

Eigen::MatrixXd path_sums(const Admg& g, const Eigen::MatrixXd& lambda) {
  const std::size_t d = g.size();
  const auto order = topological_indices(g);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  // m(i, j) = [i == j] + sum_{p in pa(i)} lambda(i, p) m(p, j), in topological order of i
  for (std::size_t i : order) {
    m(i, i) = 1.0;
    for (std::size_t p : g.parent_indices(i)) m.row(i) += lambda(i, p) * m.row(p);
  }
  return m;
}

}  // namespace

LinearScm sample_structure(const Admg& dag, const ScmGenConfig& cfg) {
  if (!(cfg.coeff_low > 0) || cfg.coeff_high < cfg.coeff_low) throw DomainError("need 0 < low <= high");
  if (!dag.is_dag()) throw DomainError("sample_structure needs a DAG");
  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> mag(cfg.coeff_low, cfg.coeff_high);
  std::bernoulli_distribution sign(0.5);
  const std::size_t d = dag.size();
  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t p : dag.parent_indices(i)) lambda(i, p) = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    const Eigen::MatrixXd m = path_sums(dag, lambda);
    bool faithful = true;
    for (std::size_t i = 0; i < d && faithful; ++i)
      for (std::size_t p : dag.parent_indices(i))
        if (std::abs(m(i, p)) <= cfg.faithfulness_tolerance) faithful = false;
    if (faithful) return LinearScm(dag, lambda, std::vector<NoiseSpec>(d, cfg.noise));
  }
  throw DegenerateStructureError("no faithful coefficient draw within " + std::to_string(cfg.max_retries) +
                                 " attempts");
}

Eigen::MatrixXd total_effects(const LinearScm& scm) { return path_sums(scm.graph(), scm.lambda()); }

Eigen::MatrixXd mixing_matrix(const LinearScm& scm) {
  const auto d = scm.lambda().rows();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(d, d) - scm.lambda();
  return a.partialPivLu().solve(Eigen::MatrixXd::Identity(d, d));
}

Dataset simulate(const LinearScm& scm, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("simulate needs n >= 1");
  const std::size_t d = scm.graph().size();
  Rng rng(seed);
  Eigen::MatrixXd noise(n, d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < d; ++j) noise(r, j) = scm.noise()[j].sample(rng);
  const Eigen::MatrixXd m = total_effects(scm);
  Eigen::MatrixXd w = noise * m.transpose();
  return Dataset(scm.graph().nodes(), std::move(w));
}

Moments analytic_covariance(const LinearScm& scm) {
  const Eigen::MatrixXd m = total_effects(scm);
  Eigen::MatrixXd cov = m * scm.noise_variances().asDiagonal() * m.transpose();
  return Moments{scm.graph().nodes(), cov};
}

Eigen::MatrixXd correlation_from_covariance(const Eigen::MatrixXd& cov) {
  const Eigen::VectorXd sd = cov.diagonal().array().sqrt();
  return sd.cwiseInverse().asDiagonal() * cov * sd.cwiseInverse().asDiagonal();
}

json scm_to_json(const LinearScm& scm) {
  json j;
  j["graph"] = graph_to_json(scm.graph());
  j["lambda"] = json::array();
  for (Eigen::Index i = 0; i < scm.lambda().rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < scm.lambda().cols(); ++k) row.push_back(scm.lambda()(i, k));
    j["lambda"].push_back(row);
  }
  j["noise"] = json::array();
  for (const auto& n : scm.noise()) {
    if (n.kind == NoiseSpec::Kind::UniformSymmetric)
      j["noise"].push_back({{"dist", "uniform"}, {"halfwidth", n.param}});
    else
      j["noise"].push_back({{"dist", "shifted_exponential"}, {"rate", n.param}});
  }
  return j;
}

LinearScm scm_from_json(const json& j) {
  for (const auto& [key, _] : j.items())
    if (key != "graph" && key != "lambda" && key != "noise") throw DomainError("SCM JSON: unknown field '" + key + "'");
  Admg g = graph_from_json(j.at("graph"));
  const std::size_t d = g.size();
  const json& lam = j.at("lambda");
  if (!lam.is_array() || lam.size() != d) throw DomainError("SCM JSON: lambda must be d x d");
  Eigen::MatrixXd lambda(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!lam[i].is_array() || lam[i].size() != d) throw DomainError("SCM JSON: lambda must be d x d");
    for (std::size_t k = 0; k < d; ++k) lambda(i, k) = lam[i][k].get<double>();
  }
  std::vector<NoiseSpec> noise;
  for (const json& n : j.at("noise")) {
    const std::string dist = n.at("dist").get<std::string>();
    if (dist == "uniform")
      noise.push_back(NoiseSpec::uniform(n.at("halfwidth").get<double>()));
    else if (dist == "shifted_exponential")
      noise.push_back(NoiseSpec::shifted_exponential(n.at("rate").get<double>()));
    else
      throw DomainError("SCM JSON: unknown noise distribution " + dist);
  }
  return LinearScm(g, lambda, noise);
}

std::pair<Admg, std::vector<NodeId>> augment_with_latents(const Admg& admg) {
  std::vector<NodeId> nodes = admg.nodes();
  std::vector<NodeId> latents;
  std::vector<NodePair> dir = admg.directed_edges();
  for (const auto& [a, b] : admg.bidirected_edges()) {
    NodeId l = "L_" + a + "_" + b;
    while (admg.contains(l)) l += "_";
    latents.push_back(l);
    nodes.push_back(l);
    dir.emplace_back(l, a);
    dir.emplace_back(l, b);
  }
  return {Admg(nodes, dir), latents};
}

Dataset ambiguity_witness(const WitnessConfig& cfg, Coupling coupling) {
  if (cfg.n == 0) throw DomainError("witness needs n >= 1");
  Rng shared(derive_seed(cfg.seed, {0}));
  Rng fresh(derive_seed(cfg.seed, {1}));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd v(cfg.n, 3);
  for (std::size_t r = 0; r < cfg.n; ++r) {
    const double z = cfg.constant_z ? 0.0 : 2.0 * unit(shared) - 1.0;
    const double u = unit(shared);
    const double other = unit(fresh);
    double u_y = other;
    if (coupling == Coupling::Comonotone) u_y = u;
    if (coupling == Coupling::Antimonotone) u_y = 1.0 - u;
    v(r, 0) = cfg.a * z + cfg.hx * (2.0 * u - 1.0);
    v(r, 1) = z;
    v(r, 2) = cfg.b * z + cfg.hy * (2.0 * u_y - 1.0);
  }
  return Dataset({"X", "Z", "Y"}, std::move(v));
}

std::array<Dataset, 3> ambiguity_witness_all(const WitnessConfig& cfg) {
  return {ambiguity_witness(cfg, Coupling::Comonotone), ambiguity_witness(cfg, Coupling::Independent),
          ambiguity_witness(cfg, Coupling::Antimonotone)};
}

}  // namespace lovo
