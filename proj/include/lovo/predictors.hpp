#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <variant>

#include "json.hpp"
#include "lovo/dataset.hpp"
#include "lovo/edge_rules.hpp"
#include "lovo/errors.hpp"

namespace lovo {

/// A correlation or an explicit refusal.
using Estimate = std::variant<double, Abstained>;

inline bool has_value(const Estimate& e) { return std::holds_alternative<double>(e); }
inline double value_of(const Estimate& e) { return std::get<double>(e); }

enum class Method { ParentAdjustment, Lingam, TrivariateRow, MaxEnt, RandomAdjustment };
std::string_view to_string(Method m);

struct PredictionRecord {
  NodePair pair;
  Method method = Method::ParentAdjustment;
  Method baseline = Method::MaxEnt;
  Estimate rho_lovo = Abstained{};
  Estimate rho_base = Abstained{};
  double rho_holdout = 0.0;
  AdjustmentSet adjustment;
  Verdict verdict = Verdict::Undecidable;
  /// How step 2 of the three-step predictor produced ŷ.
  std::string step2 = "deterministic";
};

nlohmann::json record_to_json(const PredictionRecord& r);
PredictionRecord record_from_json(const nlohmann::json& j);

/// Regression step behind the three-step predictor.
class Regressor {
 public:
  virtual ~Regressor() = default;
  /// Throws AbstainError(SingularAdjustment) on a rank-deficient design.
  virtual void fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& target) = 0;
  virtual Eigen::VectorXd predict(const Eigen::MatrixXd& features) const = 0;
};

/// Ordinary least squares with intercept.
class OlsRegressor : public Regressor {
 public:
  void fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& target) override;
  Eigen::VectorXd predict(const Eigen::MatrixXd& features) const override;
  double intercept() const { return intercept_; }
  const Eigen::VectorXd& slopes() const { return slopes_; }

 private:
  double intercept_ = 0.0;
  Eigen::VectorXd slopes_;
};

/// Three-step predictor: fit E[Y | Z_S] on dy, apply it to the z-rows of dx,
/// return Ĉov(x, ŷ) / (σ̂_X[dx] σ̂_Y[dy]) clamped to [-1, 1].
/// DomainError if zs contains x or y or a column missing from either dataset.
/// `regressor` defaults to OLS with intercept.
Estimate three_step_parent_adjustment(const Dataset& dx, const Dataset& dy, const NodeId& x, const NodeId& y,
                                      const NodeSet& zs, Regressor* regressor = nullptr);

/// The same predictor evaluated on second moments: Σ_YZ Σ_ZZ⁻¹ Σ_ZX / √(Σ_XX Σ_YY)
/// with Σ_Y· taken from my and Σ_X· from mx. Population-level when the moments
/// are analytic.
Estimate adjustment_from_moments(const Moments& mx, const Moments& my, const NodeId& x, const NodeId& y,
                                 const NodeSet& zs);

/// Shared columns of dx and dy other than x and y.
NodeSet shared_columns(const Dataset& dx, const Dataset& dy, const NodeId& x, const NodeId& y);

Estimate maxent_baseline(const Dataset& dx, const Dataset& dy, const NodeId& x, const NodeId& y);
Estimate maxent_from_moments(const Moments& mx, const Moments& my, const NodeId& x, const NodeId& y);

/// Average over k_draws uniformly drawn size-subsets of Z. Abstains if every
/// draw abstains; abstaining draws are skipped.
Estimate random_adjustment_baseline(const Dataset& dx, const Dataset& dy, const NodeId& x, const NodeId& y,
                                    std::size_t size, std::size_t k_draws, std::uint64_t seed);
/// Exact average over all size-subsets of Z at the moment level.
Estimate random_adjustment_from_moments(const Moments& mx, const Moments& my, const NodeId& x, const NodeId& y,
                                        std::size_t size);

/// Fitted joint linear model returned by the LiNGAM predictor.
struct LingamFit {
  std::vector<NodeId> names;   // joint graph order
  Eigen::MatrixXd lambda;      // (child, parent)
  Eigen::VectorXd omega;       // noise variances
  double cov_xy = 0.0;         // recovered cross moment
  double rho = 0.0;
  std::string route;           // "parent" or "child"
};

/// True when the joint graph has ch(Y) = {X, C} and ch(X) = {C}, or the same
/// with roles swapped.
bool lingam_theorem_exception(const Admg& joint, const NodeId& x, const NodeId& y);

/// LiNGAM prediction for a joint DAG with an x–y edge, from the two marginal
/// covariance matrices. Throws AbstainError (NoRecoveryRoute,
/// SingularRegression, TheoremException). PreconditionError if x and y are not
/// adjacent in the joint.
LingamFit lingam_from_moments(const Moments& mx, const Moments& my, const Admg& joint, const NodeId& x,
                              const NodeId& y);

/// Full LiNGAM predictor on data: reconstructs the joint graph from the
/// marginals and the decision, delegates absent edges to parent adjustment.
Estimate lingam_lovo(const Dataset& dx, const Dataset& dy, const MarginalPair& mp, const EdgeDecision& decision);
/// Same, on moments.
Estimate lingam_lovo_moments(const Moments& mx, const Moments& my, const MarginalPair& mp,
                             const EdgeDecision& decision);

// ---------------------------------------------------------------------------
// Three-variable predictors (X, Y, Z with exactly two arrows).

struct TrivariateStats {
  double rho_xz = 0.0;
  double rho_yz = 0.0;
};

/// The twelve two-arrow DAGs over {X, Y, Z} in table order.
Admg trivariate_graph(int row);

inline constexpr double kDenominatorTolerance = 1e-3;
inline constexpr double kConditionLimit = 1e6;

Estimate trivariate_linear(const TrivariateStats& stats, int row);
bool check_necessary_conditions(const TrivariateStats& stats, int row);

/// Column-stochastic matrix: entry (i, j) = P(row outcome i | column outcome j).
class StochasticMatrix {
 public:
  StochasticMatrix() = default;
  explicit StochasticMatrix(Eigen::MatrixXd entries, double tolerance = 1e-9);
  const Eigen::MatrixXd& entries() const { return p_; }

 private:
  Eigen::MatrixXd p_;
};

using StochasticEstimate = std::variant<StochasticMatrix, Abstained>;

/// Rows 5-7 (Y mediates): P_{Y|X} = P_{Z|Y}⁻¹ P_{Z|X}.
StochasticEstimate trivariate_stochastic(const StochasticMatrix& p_z_given_y, const StochasticMatrix& p_z_given_x);
/// Rows 9-11 (X mediates): P_{Y|X} = P_{Y|Z} P_{X|Z}⁻¹.
StochasticEstimate trivariate_stochastic_mirrored(const StochasticMatrix& p_y_given_z,
                                                  const StochasticMatrix& p_x_given_z);

}  // namespace lovo
