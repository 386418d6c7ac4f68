#include "lovo/harness.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "lovo/parallel.hpp"
#include "lovo/seeds.hpp"

namespace lovo {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Abstained abstain(AbstainReason r, std::string detail) { return Abstained{r, std::move(detail)}; }

}  // namespace

// ---------------------------------------------------------------------------

Admg perturb_graph(const Admg& g, std::size_t flips, std::uint64_t seed) {
  Rng rng(seed);
  AdmgBuilder b(g);
  const std::size_t d = g.size();
  using Edit = std::pair<std::size_t, std::size_t>;
  for (std::size_t f = 0; f < flips; ++f) {
    std::array<std::vector<Edit>, 5> cand;  // add, remove, reverse, add bi, remove bi
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (i == j) continue;
        if (b.directed(i, j)) {
          cand[1].emplace_back(i, j);
          AdmgBuilder probe = b;
          probe.remove_directed(i, j);
          if (!probe.creates_cycle(j, i)) cand[2].emplace_back(i, j);
        } else if (!b.directed(j, i) && !b.creates_cycle(i, j)) {
          cand[0].emplace_back(i, j);
        }
        if (i < j) cand[b.bidirected(i, j) ? 4 : 3].emplace_back(i, j);
      }
    std::vector<std::size_t> kinds;
    for (std::size_t k = 0; k < cand.size(); ++k)
      if (!cand[k].empty()) kinds.push_back(k);
    if (kinds.empty()) break;
    const std::size_t kind = kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)];
    const auto [i, j] = cand[kind][std::uniform_int_distribution<std::size_t>(0, cand[kind].size() - 1)(rng)];
    switch (kind) {
      case 0:
        b.add_directed(i, j);
        break;
      case 1:
        b.remove_directed(i, j);
        break;
      case 2:
        b.remove_directed(i, j).add_directed(j, i);
        break;
      case 3:
        b.add_bidirected(i, j);
        break;
      default:
        b.remove_bidirected(i, j);
    }
  }
  return b.build();
}

// ---------------------------------------------------------------------------

ProvidedMarginals OracleProvider::provide(const NodeId& x, const NodeId& y, const Dataset&, const Dataset&) const {
  return {latent_project(joint_, y), latent_project(joint_, x), GraphConvention::ConfoundedLinks};
}

ProvidedMarginals PerturbedProvider::provide(const NodeId& x, const NodeId& y, const Dataset&,
                                             const Dataset&) const {
  const std::uint64_t ix = joint_.index(x), iy = joint_.index(y);
  return {perturb_graph(latent_project(joint_, y), flips_, derive_seed(seed_, {ix, iy, 0})),
          perturb_graph(latent_project(joint_, x), flips_, derive_seed(seed_, {ix, iy, 1})),
          GraphConvention::ConfoundedLinks};
}

AdapterProvider::AdapterProvider(std::string command, fs::path workdir, std::optional<Dataset> learn,
                                 std::optional<std::size_t> n_learn)
    : command_(std::move(command)), workdir_(std::move(workdir)), learn_(std::move(learn)), n_learn_(n_learn) {
  if (command_.empty()) throw DomainError("adapter command is empty");
  if (n_learn_ && *n_learn_ < 2) throw DomainError("n_learn must be at least 2");
}

ProvidedMarginals AdapterProvider::provide(const NodeId&, const NodeId&, const Dataset& dx,
                                           const Dataset& dy) const {
  auto learning = [&](const Dataset& own) {
    Dataset d = learn_ ? learn_->select(own.columns()) : own;
    if (n_learn_ && *n_learn_ < d.rows()) d = d.slice(0, *n_learn_);
    return d;
  };
  const GraphDocument gx = run_adapter(command_, learning(dx), workdir_, "gx");
  const GraphDocument gy = run_adapter(command_, learning(dy), workdir_, "gy");
  const bool plain = gx.convention.value_or(GraphConvention::ConfoundedLinks) == GraphConvention::ConfoundedLinks &&
                     gy.convention.value_or(GraphConvention::ConfoundedLinks) == GraphConvention::ConfoundedLinks;
  return {gx.graph, gy.graph, plain ? GraphConvention::ConfoundedLinks : GraphConvention::NoConfoundedLinks};
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

struct TempFiles {
  std::vector<fs::path> paths;
  ~TempFiles() {
    std::error_code ec;
    for (const auto& p : paths) fs::remove(p, ec);
  }
};

}  // namespace

GraphDocument run_adapter(const std::string& command, const Dataset& data, const fs::path& workdir,
                          const std::string& tag) {
  static std::atomic<std::uint64_t> counter{0};
  const std::string stem =
      "lovo-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" + tag;
  TempFiles files;
  const fs::path input = workdir / (stem + ".csv");
  const fs::path output = workdir / (stem + ".json");
  files.paths = {input, output};
  write_csv(input, data);
  const std::string line =
      command + " --input " + shell_quote(input.string()) + " --output " + shell_quote(output.string());
  const int status = std::system(line.c_str());
  if (status == -1) throw AbstainError(abstain(AbstainReason::AdapterError, "could not start adapter"));
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw AbstainError(abstain(AbstainReason::AdapterError,
                               "adapter exited with status " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1)));
  GraphDocument doc;
  try {
    doc = read_graph_file(output);
  } catch (const std::exception& e) {
    throw AbstainError(abstain(AbstainReason::AdapterError, std::string("invalid graph output: ") + e.what()));
  }
  const NodeSet want(data.columns().begin(), data.columns().end());
  const NodeSet got(doc.graph.nodes().begin(), doc.graph.nodes().end());
  if (want != got) throw AbstainError(abstain(AbstainReason::AdapterError, "graph nodes differ from data columns"));
  return doc;
}

// ---------------------------------------------------------------------------

std::string_view to_string(EdgeRule r) {
  switch (r) {
    case EdgeRule::EdgeType:
      return "edge-type";
    case EdgeRule::DirectedPart:
      return "directed-part";
    case EdgeRule::ChildSibling:
      return "child-sibling";
  }
  return "edge-type";
}

EdgeRule edge_rule_from_string(std::string_view s) {
  for (EdgeRule r : {EdgeRule::EdgeType, EdgeRule::DirectedPart, EdgeRule::ChildSibling})
    if (to_string(r) == s) return r;
  throw DomainError("unknown edge rule: " + std::string(s));
}

EdgeDecision decide_edge(const MarginalPair& mp, EdgeRule rule, GraphConvention convention) {
  if (convention == GraphConvention::NoConfoundedLinks)
    return classify_edge_admg_no_confounded_links(
        mp, rule == EdgeRule::EdgeType ? NoConfoundedLinksRule::DagEdgeType : NoConfoundedLinksRule::ChildSibling);
  switch (rule) {
    case EdgeRule::EdgeType:
      return classify_edge_dag(mp);
    case EdgeRule::DirectedPart:
      return exclude_link_directed(mp, true);
    case EdgeRule::ChildSibling:
      return exclude_link_admg(mp);
  }
  return classify_edge_dag(mp);
}

void CrossValConfig::validate() const {
  double sum = 0;
  for (double f : split) {
    if (!(f > 0)) throw DomainError("split fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("split fractions must sum to 1");
  if (predictor != Method::ParentAdjustment && predictor != Method::Lingam)
    throw DomainError("predictor must be ParentAdjustment or Lingam");
  if (baseline != Method::MaxEnt && baseline != Method::RandomAdjustment)
    throw DomainError("baseline must be MaxEnt or RandomAdjustment");
  if (random_draws == 0) throw DomainError("random_draws must be positive");
}

namespace {

struct Splits {
  Dataset learn_x, learn_y, holdout;
};

Splits split_rows(const Dataset& d, const std::array<double, 3>& f) {
  const std::size_t n = d.rows();
  const auto n1 = static_cast<std::size_t>(std::floor(f[0] * double(n)));
  const auto n2 = static_cast<std::size_t>(std::floor(f[1] * double(n)));
  if (n1 < 3 || n2 < 3 || n - n1 - n2 < 3) throw DomainError("too few rows for a three-way split");
  return {d.slice(0, n1), d.slice(n1, n1 + n2), d.slice(n1 + n2, n)};
}

bool decidable(const EdgeDecision& d, Method predictor) {
  if (predictor == Method::ParentAdjustment) return d.verdict == Verdict::Absent;
  return d.verdict != Verdict::Undecidable;
}

PredictionRecord evaluate_pair(const Splits& s, const NodeId& a, const NodeId& b, std::size_t k,
                               const MarginalProvider& provider, const CrossValConfig& cfg,
                               std::optional<ProvidedMarginals>& graphs_out) {
  PredictionRecord rec;
  rec.pair = {a, b};
  rec.method = cfg.predictor;
  rec.baseline = cfg.baseline;
  rec.rho_holdout = pearson(s.holdout.column(a), s.holdout.column(b));
  rec.adjustment.provenance = AdjustmentProvenance::UnionOfParents;

  Dataset dx = s.learn_x.without({b});
  Dataset dy = s.learn_y.without({a});
  NodeId x = a, y = b;
  std::optional<std::size_t> adjustment_size;

  try {
    graphs_out = provider.provide(a, b, dx, dy);
  } catch (const AbstainError& e) {
    rec.rho_lovo = e.abstained();
  }

  if (graphs_out) {
    MarginalPair mp{graphs_out->gx, graphs_out->gy, a, b};
    std::optional<EdgeDecision> decision;
    try {
      mp.validate();
      decision = decide_edge(mp, cfg.rule, graphs_out->convention);
      if (!decidable(*decision, cfg.predictor)) {
        const EdgeDecision other = decide_edge(mp.swapped(), cfg.rule, graphs_out->convention);
        if (decidable(other, cfg.predictor)) {
          decision = other;
          mp = mp.swapped();
          std::swap(dx, dy);
          std::swap(x, y);
          rec.pair = {x, y};
        }
      }
    } catch (const DomainError& e) {
      rec.rho_lovo = abstain(AbstainReason::InvalidMarginals, e.what());
    }
    if (decision) {
      rec.verdict = decision->verdict;
      if (decision->verdict == Verdict::Absent) {
        try {
          rec.adjustment = union_of_parents(mp, *decision);
          adjustment_size = rec.adjustment.members.size();
        } catch (const AbstainError& e) {
          rec.rho_lovo = e.abstained();
        }
      }
      if (cfg.predictor == Method::ParentAdjustment) {
        if (decision->verdict == Verdict::Undecidable)
          rec.rho_lovo = abstain(AbstainReason::Undecidable, "x-y link not excluded");
        else if (decision->verdict != Verdict::Absent)
          rec.rho_lovo = abstain(AbstainReason::NoRecoveryRoute, "parent adjustment needs an absent edge");
        else if (adjustment_size)
          rec.rho_lovo = three_step_parent_adjustment(dx, dy, x, y, rec.adjustment.members);
      } else {
        rec.rho_lovo = lingam_lovo(dx, dy, mp, *decision);
      }
      if (!adjustment_size) {
        NodeSet pa = mp.gx.parents(x);
        const NodeSet py = mp.gy.parents(y);
        pa.insert(py.begin(), py.end());
        adjustment_size = pa.size();
      }
    }
  }

  if (cfg.baseline == Method::MaxEnt) {
    rec.rho_base = maxent_baseline(dx, dy, x, y);
  } else if (adjustment_size) {
    rec.rho_base =
        random_adjustment_baseline(dx, dy, x, y, *adjustment_size, cfg.random_draws, derive_seed(cfg.seed, {k}));
  } else {
    rec.rho_base = abstain(AbstainReason::Undefined, "adjustment size unknown without marginal graphs");
  }
  return rec;
}

}  // namespace

CrossValReport run_crossval(const Dataset& joint_data, const MarginalProvider& provider, const CrossValConfig& cfg) {
  cfg.validate();
  std::vector<NodePair> pairs = cfg.pairs;
  const auto& cols = joint_data.columns();
  if (pairs.empty()) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      for (std::size_t j = i + 1; j < cols.size(); ++j) pairs.emplace_back(cols[i], cols[j]);
  }
  for (const auto& [a, b] : pairs) {
    if (a == b) throw DomainError("pair with identical variables: " + a);
    if (!joint_data.has_column(a) || !joint_data.has_column(b)) throw DomainError("pair refers to unknown column");
  }
  const Splits s = split_rows(joint_data, cfg.split);
  CrossValReport report;
  report.records.resize(pairs.size());
  report.graphs.resize(pairs.size());
  parallel_for(pairs.size(), cfg.jobs, [&](std::size_t k) {
    report.records[k] = evaluate_pair(s, pairs[k].first, pairs[k].second, k, provider, cfg, report.graphs[k]);
  });
  aggregate(report);
  return report;
}

namespace {

bool used(const PredictionRecord& r) {
  return has_value(r.rho_lovo) && has_value(r.rho_base) && std::isfinite(r.rho_holdout);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void aggregate(CrossValReport& report) {
  double lovo = 0, base = 0;
  std::size_t n_used = 0, n_abstained = 0;
  report.abstentions.clear();
  for (const auto& r : report.records) {
    if (!has_value(r.rho_lovo)) {
      ++n_abstained;
      ++report.abstentions[std::string(to_string(std::get<Abstained>(r.rho_lovo).reason))];
    }
    if (!used(r)) continue;
    lovo += std::abs(value_of(r.rho_lovo) - r.rho_holdout);
    base += std::abs(value_of(r.rho_base) - r.rho_holdout);
    ++n_used;
  }
  report.pairs_used = n_used;
  report.no_pairs = n_used == 0;
  report.cv_lovo = n_used ? lovo / double(n_used) : kNaN;
  report.cv_base = n_used ? base / double(n_used) : kNaN;
  report.abstained_fraction = report.records.empty() ? 0.0 : double(n_abstained) / double(report.records.size());
}

json report_to_json(const CrossValReport& report, const json& config) {
  json j;
  j["config"] = config;
  j["records"] = json::array();
  for (const auto& r : report.records) j["records"].push_back(record_to_json(r));
  j["cv_lovo"] = number_or_null(report.cv_lovo);
  j["cv_base"] = number_or_null(report.cv_base);
  j["abstained_fraction"] = report.abstained_fraction;
  j["pairs_used"] = report.pairs_used;
  j["no_pairs"] = report.no_pairs;
  j["abstentions"] = report.abstentions;
  return j;
}

AccuracyMetrics accuracy_metrics(const CrossValReport& report, const Admg& truth) {
  AccuracyMetrics m;
  double shd_total = 0;
  std::size_t linked = 0;
  for (std::size_t k = 0; k < report.records.size(); ++k) {
    const auto& r = report.records[k];
    if (!used(r) || !report.graphs[k]) continue;
    const auto& [x, y] = r.pair;
    const auto& g = *report.graphs[k];
    // graphs are stored in the provider's (unswapped) orientation
    const bool swapped = g.gx.contains(y);
    const Admg& gx = swapped ? g.gy : g.gx;
    const Admg& gy = swapped ? g.gx : g.gy;
    shd_total += double(shd(gx, latent_project(truth, y)) + shd(gy, latent_project(truth, x)));
    ++m.used_pairs;
    if (r.verdict == Verdict::Absent) {
      ++m.absent_pairs;
      if (truth.adjacent(truth.index(x), truth.index(y))) ++linked;
    }
  }
  m.shd_sum = m.used_pairs ? shd_total / double(m.used_pairs) : kNaN;
  m.false_absence_rate = m.absent_pairs ? double(linked) / double(m.absent_pairs) : kNaN;
  return m;
}

CorrelationStudy correlate_error_with_accuracy(const std::vector<std::pair<CrossValReport, AccuracyMetrics>>& reports) {
  if (reports.size() < 10) throw PreconditionError("correlation study needs at least 10 reports");
  CorrelationStudy out;
  auto study = [&](auto metric, std::size_t& count) -> SpearmanEstimate {
    std::vector<double> cv, acc;
    for (const auto& [rep, m] : reports) {
      const double v = metric(m);
      if (std::isfinite(rep.cv_lovo) && std::isfinite(v)) {
        cv.push_back(rep.cv_lovo);
        acc.push_back(v);
      }
    }
    count = cv.size();
    if (cv.size() < 3) return abstain(AbstainReason::Undefined, "fewer than 3 usable reports");
    return spearman(cv, acc);
  };
  out.vs_false_absence =
      study([](const AccuracyMetrics& m) { return m.false_absence_rate; }, out.reports_used_false_absence);
  out.vs_shd = study([](const AccuracyMetrics& m) { return m.shd_sum; }, out.reports_used_shd);
  return out;
}

// ---------------------------------------------------------------------------

void SimulationConfig::validate() const {
  if (nodes < 2) throw DomainError("need at least 2 nodes");
  if (!(p >= 0 && p <= 1) || !(q >= 0 && q <= 1)) throw DomainError("probabilities must lie in [0, 1]");
  if (n < 9) throw DomainError("need at least 9 samples");
}

Replication simulate_replication(const SimulationConfig& sim, std::uint64_t seed) {
  sim.validate();
  GraphGenConfig gcfg;
  gcfg.node_count = sim.nodes;
  gcfg.p = sim.p;
  gcfg.q = sim.q;
  gcfg.seed = derive_seed(seed, {0});
  Admg joint = sim.q > 0 ? generate_er_admg(gcfg) : generate_er_dag(gcfg);
  auto [dag, latents] = augment_with_latents(joint);
  ScmGenConfig scfg = sim.scm;
  scfg.seed = derive_seed(seed, {1});
  LinearScm scm = sample_structure(dag, scfg);
  Replication rep{std::move(joint), std::move(scm), Dataset()};
  rep.data = simulate_observed(rep, sim.n, derive_seed(seed, {2}));
  return rep;
}

Dataset simulate_observed(const Replication& rep, std::size_t n, std::uint64_t seed) {
  return simulate(rep.scm, n, seed).select(rep.joint.nodes());
}

ProviderMode ProviderMode::parse(std::string_view text) {
  ProviderMode m;
  if (text == "oracle") return m;
  if (text.rfind("perturbed:", 0) == 0) {
    const std::string_view k = text.substr(10);
    std::size_t flips = 0;
    const auto res = std::from_chars(k.data(), k.data() + k.size(), flips);
    if (k.empty() || res.ec != std::errc() || res.ptr != k.data() + k.size())
      throw DomainError("perturbed mode needs a non-negative integer: " + std::string(text));
    m.kind = Kind::Perturbed;
    m.flips = flips;
    return m;
  }
  if (text.rfind("adapter:", 0) == 0 && text.size() > 8) {
    m.kind = Kind::Adapter;
    m.command = std::string(text.substr(8));
    return m;
  }
  throw DomainError("mode must be oracle, perturbed:K or adapter:CMD, got " + std::string(text));
}

std::string ProviderMode::to_string() const {
  switch (kind) {
    case Kind::Oracle:
      return "oracle";
    case Kind::Perturbed:
      return "perturbed:" + std::to_string(flips);
    case Kind::Adapter:
      return "adapter:" + command;
  }
  return "oracle";
}

std::vector<StudyReplication> run_study(const StudyConfig& cfg) {
  cfg.sim.validate();
  cfg.cv.validate();
  std::vector<StudyReplication> out(cfg.replications);
  parallel_for(cfg.replications, cfg.jobs, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(cfg.seed, {r});
    const Replication rep = simulate_replication(cfg.sim, seed);
    CrossValConfig cv = cfg.cv;
    cv.seed = derive_seed(seed, {3});
    cv.jobs = 1;
    std::unique_ptr<MarginalProvider> provider;
    switch (cfg.mode.kind) {
      case ProviderMode::Kind::Oracle:
        provider = std::make_unique<OracleProvider>(rep.joint);
        break;
      case ProviderMode::Kind::Perturbed:
        provider = std::make_unique<PerturbedProvider>(rep.joint, cfg.mode.flips, derive_seed(seed, {4}));
        break;
      case ProviderMode::Kind::Adapter: {
        std::optional<Dataset> learn;
        if (cfg.n_learn) learn = simulate_observed(rep, *cfg.n_learn, derive_seed(seed, {5}));
        provider = std::make_unique<AdapterProvider>(cfg.mode.command, cfg.workdir, std::move(learn), cfg.n_learn);
        break;
      }
    }
    out[r].index = r;
    out[r].report = run_crossval(rep.data, *provider, cv);
    out[r].accuracy = accuracy_metrics(out[r].report, rep.joint);
  });
  return out;
}

// ---------------------------------------------------------------------------

std::size_t count_detected_absent(const Admg& g, int lemma) {
  if (lemma < 2 || lemma > 4) throw DomainError("lemma must be 2, 3 or 4");
  if (lemma != 2 && !g.is_dag()) throw DomainError("lemmas 3 and 4 need a DAG");
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const MarginalPair mp = marginals_of(g, g.name(i), g.name(j));
      const EdgeDecision d = lemma == 2   ? exclude_link_admg(mp)
                             : lemma == 3 ? exclude_link_directed(mp, true)
                                          : classify_edge_dag(mp);
      if (d.verdict == Verdict::Absent) ++count;
    }
  return count;
}

LemmaStudyRow lemma_study_point(int lemma, std::size_t nodes, double p, double q, std::size_t replications,
                                std::uint64_t seed, std::size_t jobs) {
  if (lemma < 2 || lemma > 4) throw DomainError("lemma must be 2, 3 or 4");
  if (replications == 0) throw DomainError("replications must be positive");
  const double qq = lemma == 2 ? q : 0.0;
  std::vector<std::size_t> detected(replications), absent(replications);
  parallel_for(replications, jobs, [&](std::size_t r) {
    GraphGenConfig cfg;
    cfg.node_count = nodes;
    cfg.p = p;
    cfg.q = qq;
    cfg.seed = derive_seed(seed, {r});
    const Admg g = lemma == 2 ? generate_er_admg(cfg) : generate_er_dag(cfg);
    detected[r] = count_detected_absent(g, lemma);
    std::size_t a = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j) a += !g.adjacent(i, j);
    absent[r] = a;
  });
  LemmaStudyRow row;
  row.lemma = lemma;
  row.parameter = lemma == 2 ? "q" : "p";
  row.value = lemma == 2 ? q : p;
  row.replications = replications;
  std::size_t zeros = 0;
  double det = 0, abs = 0;
  for (std::size_t r = 0; r < replications; ++r) {
    zeros += detected[r] == 0;
    det += double(detected[r]);
    abs += double(absent[r]);
  }
  row.zero_fraction = double(zeros) / double(replications);
  row.mean_detected = det / double(replications);
  row.mean_true_absent = abs / double(replications);
  row.expected_absent = (1 - p) * (1 - qq) * double(nodes * (nodes - 1) / 2);
  return row;
}

}  // namespace lovo
