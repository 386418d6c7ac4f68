#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "lovo/dataset.hpp"
#include "lovo/graph.hpp"
#include "lovo/seeds.hpp"

namespace lovo {

/// Centered non-Gaussian noise.
struct NoiseSpec {
  enum class Kind { UniformSymmetric, ShiftedExponential };
  Kind kind = Kind::UniformSymmetric;
  double param = 1.0;  // halfwidth for uniform, rate for exponential

  static NoiseSpec uniform(double halfwidth) { return {Kind::UniformSymmetric, halfwidth}; }
  static NoiseSpec shifted_exponential(double rate) { return {Kind::ShiftedExponential, rate}; }

  double variance() const;
  double sample(Rng& rng) const;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Coefficient sampling couldn't reach a faithful structure within the cap.
class DegenerateStructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear additive noise model W = Λ W + N over a DAG. lambda(child, parent),
/// rows and columns in graph node order.
class LinearScm {
 public:
  LinearScm(Admg graph, Eigen::MatrixXd lambda, std::vector<NoiseSpec> noise);

  const Admg& graph() const { return graph_; }
  const Eigen::MatrixXd& lambda() const { return lambda_; }
  const std::vector<NoiseSpec>& noise() const { return noise_; }
  double coefficient(std::string_view child, std::string_view parent) const;
  Eigen::VectorXd noise_variances() const;

 private:
  Admg graph_;
  Eigen::MatrixXd lambda_;
  std::vector<NoiseSpec> noise_;
};

struct ScmGenConfig {
  double coeff_low = 0.5;
  double coeff_high = 1.0;
  std::uint64_t seed = 0;
  double faithfulness_tolerance = 1e-6;
  int max_retries = 100;
  NoiseSpec noise = NoiseSpec::uniform(1.0);
};

/// Coefficients uniform on [-high,-low] ∪ [low,high]; the whole matrix is
/// redrawn while some edge has a total effect below the tolerance.
LinearScm sample_structure(const Admg& dag, const ScmGenConfig& cfg);

/// n draws of W = (I - Λ)^{-1} N.
Dataset simulate(const LinearScm& scm, std::size_t n, std::uint64_t seed);

/// m(i, j): sum over directed paths j -> ... -> i of coefficient products,
/// with m(i, i) = 1. Computed by dynamic programming over a topological order.
Eigen::MatrixXd total_effects(const LinearScm& scm);
/// (I - Λ)^{-1} by LU solve.
Eigen::MatrixXd mixing_matrix(const LinearScm& scm);
/// Σ = M Ω Mᵀ with Ω = diag(noise variances); names in graph order.
Moments analytic_covariance(const LinearScm& scm);
Eigen::MatrixXd correlation_from_covariance(const Eigen::MatrixXd& cov);

nlohmann::json scm_to_json(const LinearScm& scm);
LinearScm scm_from_json(const nlohmann::json& j);

/// Replaces every bidirected edge A <-> B by a latent parent "L_A_B" of both.
/// Returns the DAG and the latent names.
std::pair<Admg, std::vector<NodeId>> augment_with_latents(const Admg& admg);

/// Coupling of the quantile noises of X and Y given Z.
enum class Coupling { Independent, Comonotone, Antimonotone };

struct WitnessConfig {
  double a = 1.0;         // X = a Z + hx (2U - 1)
  double b = 1.0;         // Y = b Z + hy (2U' - 1)
  double hx = 1.0;
  double hy = 1.0;
  bool constant_z = false;  // Z ≡ 0 instead of Uniform[-1, 1]
  std::size_t n = 100000;
  std::uint64_t seed = 0;
};

/// Joint samples over (X, Z, Y) whose (X, Z) and (Y, Z) marginals do not
/// depend on the coupling. Z and U are drawn from the same stream for every
/// coupling; U' = U, 1 - U, or fresh.
Dataset ambiguity_witness(const WitnessConfig& cfg, Coupling coupling);
std::array<Dataset, 3> ambiguity_witness_all(const WitnessConfig& cfg);

}  // namespace lovo
