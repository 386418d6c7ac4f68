#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lovo/dataset.hpp"
#include "lovo/edge_rules.hpp"
#include "lovo/graph.hpp"
#include "lovo/graph_json.hpp"
#include "lovo/predictors.hpp"
#include "lovo/scm.hpp"
#include "lovo/stats.hpp"

namespace lovo {

/// `flips` random edits (add/remove/reverse a directed edge, add/remove a
/// bidirected edge), each keeping the directed part acyclic.
Admg perturb_graph(const Admg& g, std::size_t flips, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Marginal graph providers

struct ProvidedMarginals {
  Admg gx;  // over {x} ∪ Z
  Admg gy;  // over {y} ∪ Z
  GraphConvention convention = GraphConvention::ConfoundedLinks;
};

/// Supplies (G_X, G_Y) for a pair. Implementations must be safe to call from
/// several threads at once. Failures throw AbstainError.
class MarginalProvider {
 public:
  virtual ~MarginalProvider() = default;
  virtual ProvidedMarginals provide(const NodeId& x, const NodeId& y, const Dataset& dx,
                                    const Dataset& dy) const = 0;
};

/// True latent projections of a known joint graph.
class OracleProvider : public MarginalProvider {
 public:
  explicit OracleProvider(Admg joint) : joint_(std::move(joint)) {}
  ProvidedMarginals provide(const NodeId& x, const NodeId& y, const Dataset&, const Dataset&) const override;

 private:
  Admg joint_;
};

/// Oracle projections with `flips` random edits applied to each marginal.
class PerturbedProvider : public MarginalProvider {
 public:
  PerturbedProvider(Admg joint, std::size_t flips, std::uint64_t seed)
      : joint_(std::move(joint)), flips_(flips), seed_(seed) {}
  ProvidedMarginals provide(const NodeId& x, const NodeId& y, const Dataset&, const Dataset&) const override;

 private:
  Admg joint_;
  std::size_t flips_;
  std::uint64_t seed_;
};

/// External discovery command, invoked as `CMD --input <csv> --output <json>`.
/// Learns on `learn` (restricted to the marginal's columns, first n_learn rows)
/// when given, otherwise on the predictor's own samples.
class AdapterProvider : public MarginalProvider {
 public:
  AdapterProvider(std::string command, std::filesystem::path workdir, std::optional<Dataset> learn = std::nullopt,
                  std::optional<std::size_t> n_learn = std::nullopt);
  ProvidedMarginals provide(const NodeId& x, const NodeId& y, const Dataset& dx, const Dataset& dy) const override;

 private:
  std::string command_;
  std::filesystem::path workdir_;
  std::optional<Dataset> learn_;
  std::optional<std::size_t> n_learn_;
};

/// One adapter call. Throws AbstainError(AdapterError) on a non-zero exit, a
/// missing or invalid graph file, or a node set that differs from the columns.
GraphDocument run_adapter(const std::string& command, const Dataset& data, const std::filesystem::path& workdir,
                          const std::string& tag);

// ---------------------------------------------------------------------------
// Cross-validation

enum class EdgeRule { EdgeType, DirectedPart, ChildSibling };
std::string_view to_string(EdgeRule r);
EdgeRule edge_rule_from_string(std::string_view s);

/// Dispatch to the edge decision for the rule; graphs flagged with the
/// no-confounded-links convention always use the sibling-demoting variant.
EdgeDecision decide_edge(const MarginalPair& mp, EdgeRule rule, GraphConvention convention);

struct CrossValConfig {
  Method predictor = Method::ParentAdjustment;
  Method baseline = Method::RandomAdjustment;
  std::array<double, 3> split{1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::vector<NodePair> pairs;  // empty: every unordered pair of columns
  EdgeRule rule = EdgeRule::EdgeType;
  std::size_t random_draws = 10;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  void validate() const;
};

struct CrossValReport {
  std::vector<PredictionRecord> records;
  std::vector<std::optional<ProvidedMarginals>> graphs;  // per record; empty when the provider failed
  double cv_lovo = 0.0;  // NaN when no pair was used
  double cv_base = 0.0;
  double abstained_fraction = 0.0;
  std::size_t pairs_used = 0;
  bool no_pairs = true;
  std::map<std::string, std::size_t> abstentions;  // reason -> count
};

/// Rows are split contiguously by the configured fractions: dx from the first
/// part, dy from the second, the holdout correlation from the third.
CrossValReport run_crossval(const Dataset& joint_data, const MarginalProvider& provider, const CrossValConfig& cfg);

/// Recomputes the aggregates of a report from its records.
void aggregate(CrossValReport& report);

nlohmann::json report_to_json(const CrossValReport& report, const nlohmann::json& config = nullptr);

struct AccuracyMetrics {
  double false_absence_rate = 0.0;  // NaN when no used pair was declared Absent
  double shd_sum = 0.0;             // NaN when no pair was used
  std::size_t absent_pairs = 0;
  std::size_t used_pairs = 0;
};

/// Over used (non-abstained) pairs only.
AccuracyMetrics accuracy_metrics(const CrossValReport& report, const Admg& truth);

struct CorrelationStudy {
  SpearmanEstimate vs_false_absence = Abstained{};
  SpearmanEstimate vs_shd = Abstained{};
  std::size_t reports_used_false_absence = 0;
  std::size_t reports_used_shd = 0;
};

/// Needs at least 10 reports; reports with an undefined metric are skipped for
/// that metric.
CorrelationStudy correlate_error_with_accuracy(const std::vector<std::pair<CrossValReport, AccuracyMetrics>>& reports);

// ---------------------------------------------------------------------------
// Simulation studies

struct SimulationConfig {
  std::size_t nodes = 10;
  double p = 0.3;
  double q = 0.0;
  std::size_t n = 5000;
  ScmGenConfig scm;

  void validate() const;
};

struct Replication {
  Admg joint;     // over observed nodes
  LinearScm scm;  // over observed nodes and latent confounders
  Dataset data;   // observed columns only
};

/// Graph, coefficients and samples from independent streams of `seed`.
/// Bidirected edges are simulated through one latent parent each.
Replication simulate_replication(const SimulationConfig& sim, std::uint64_t seed);
Dataset simulate_observed(const Replication& rep, std::size_t n, std::uint64_t seed);

/// "oracle", "perturbed:K" or "adapter:CMD".
struct ProviderMode {
  enum class Kind { Oracle, Perturbed, Adapter } kind = Kind::Oracle;
  std::size_t flips = 0;
  std::string command;

  static ProviderMode parse(std::string_view text);
  std::string to_string() const;
};

struct StudyConfig {
  SimulationConfig sim;
  CrossValConfig cv;
  ProviderMode mode;
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::optional<std::size_t> n_learn;  // adapter mode: separate learning sample size
  std::filesystem::path workdir = std::filesystem::temp_directory_path();
};

struct StudyReplication {
  std::size_t index = 0;
  CrossValReport report;
  AccuracyMetrics accuracy;
};

/// Replications run in parallel; results are ordered by replication index.
std::vector<StudyReplication> run_study(const StudyConfig& cfg);

struct LemmaStudyRow {
  int lemma = 4;
  std::string parameter;  // "p" or "q"
  double value = 0.0;
  std::size_t replications = 0;
  double zero_fraction = 0.0;     // graphs with no pair detected as unlinked
  double mean_detected = 0.0;     // pairs detected as unlinked per graph
  double mean_true_absent = 0.0;  // unlinked pairs per graph
  double expected_absent = 0.0;   // (1-p)(1-q) C(d, 2)
};

/// Unordered pairs of `g` that the rule of `lemma` (2, 3 or 4) declares Absent
/// from the true marginals. Lemma 2 reads the ADMG; 3 and 4 need a DAG.
std::size_t count_detected_absent(const Admg& g, int lemma);

/// Lemma 2 samples ADMGs with the given p and q; lemmas 3 and 4 sample DAGs
/// with p (q ignored).
LemmaStudyRow lemma_study_point(int lemma, std::size_t nodes, double p, double q, std::size_t replications,
                                std::uint64_t seed, std::size_t jobs = 1);

}  // namespace lovo
