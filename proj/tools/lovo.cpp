// lovo: leave-one-variable-out falsification studies and checks.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lovo/harness.hpp"
#include "lovo/seeds.hpp"

using namespace lovo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("bad grid value: " + item);
    }
  }
  if (out.empty()) throw DomainError("empty grid");
  return out;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// options shared by the simulation-driven commands
struct SimOptions {
  std::size_t nodes = 10;
  double p = 0.3;
  double q = 0.0;
  std::size_t n = 5000;
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  std::string predictor = "parent";
  std::string baseline;  // default depends on the predictor
  std::string rule;      // default depends on q
  std::string mode = "oracle";
  std::size_t jobs = 1;
  std::size_t n_learn = 0;
  fs::path out;

  void attach(CLI::App* app, bool with_mode) {
    app->add_option("--nodes", nodes, "Number of observed variables")->check(CLI::Range(2, 1000));
    app->add_option("--p", p, "Directed edge probability")->check(CLI::Range(0.0, 1.0));
    app->add_option("--q", q, "Bidirected edge probability")->check(CLI::Range(0.0, 1.0));
    app->add_option("--n", n, "Samples per replication")->check(CLI::Range(9, 100000000));
    app->add_option("--replications", replications, "Replications")->check(CLI::Range(1, 1000000));
    app->add_option("--seed", seed, "Root seed")->envname("LOVO_SEED");
    app->add_option("--predictor", predictor, "LOVO predictor")->check(CLI::IsMember({"parent", "lingam"}));
    app->add_option("--baseline", baseline, "Baseline (default: random for parent, maxent for lingam)")
        ->check(CLI::IsMember({"maxent", "random"}));
    app->add_option("--rule", rule, "Edge rule (default: edge-type, child-sibling when q > 0)")
        ->check(CLI::IsMember({"edge-type", "directed-part", "child-sibling"}));
    if (with_mode) app->add_option("--mode", mode, "oracle, perturbed:K or adapter:\"CMD\"");
    app->add_option("--n-learn", n_learn, "Adapter mode: separate learning sample size");
    app->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 1024));
    app->add_option("--out", out, "Output directory");
  }

  StudyConfig study() const {
    StudyConfig cfg;
    cfg.sim.nodes = nodes;
    cfg.sim.p = p;
    cfg.sim.q = q;
    cfg.sim.n = n;
    cfg.replications = replications;
    cfg.seed = seed;
    cfg.jobs = jobs;
    cfg.mode = ProviderMode::parse(mode);
    cfg.cv.predictor = predictor == "lingam" ? Method::Lingam : Method::ParentAdjustment;
    const std::string base = baseline.empty() ? (predictor == "lingam" ? "maxent" : "random") : baseline;
    cfg.cv.baseline = base == "maxent" ? Method::MaxEnt : Method::RandomAdjustment;
    cfg.cv.rule = rule.empty() ? (q > 0 ? EdgeRule::ChildSibling : EdgeRule::EdgeType) : edge_rule_from_string(rule);
    if (n_learn > 0) cfg.n_learn = n_learn;
    return cfg;
  }

  json to_json() const {
    const StudyConfig c = study();
    return {{"nodes", nodes},
            {"p", p},
            {"q", q},
            {"n", n},
            {"replications", replications},
            {"seed", seed},
            {"predictor", std::string(to_string(c.cv.predictor))},
            {"baseline", std::string(to_string(c.cv.baseline))},
            {"rule", std::string(to_string(c.cv.rule))},
            {"mode", c.mode.to_string()},
            {"n_learn", n_learn}};
  }
};

const char* kScatterHeader = "replication,cv_lovo,cv_base,abstained_fraction,pairs_used,false_absence_rate,shd_sum\n";

std::string scatter_row(const StudyReplication& r) {
  return std::to_string(r.index) + "," + fmt(r.report.cv_lovo) + "," + fmt(r.report.cv_base) + "," +
         fmt(r.report.abstained_fraction) + "," + std::to_string(r.report.pairs_used) + "," +
         fmt(r.accuracy.false_absence_rate) + "," + fmt(r.accuracy.shd_sum) + "\n";
}

json spearman_json(const SpearmanEstimate& e, std::size_t used) {
  if (const auto* r = std::get_if<SpearmanResult>(&e))
    return {{"rho", r->rho}, {"p_value", r->p_value}, {"reports", used}};
  const auto& a = std::get<Abstained>(e);
  return {{"undefined", std::string(to_string(a.reason))}, {"detail", a.detail}, {"reports", used}};
}

json summarize(const std::vector<StudyReplication>& results) {
  std::size_t wins = 0, valid = 0;
  std::map<std::string, std::size_t> reasons;
  for (const auto& r : results) {
    for (const auto& [k, v] : r.report.abstentions) reasons[k] += v;
    if (r.report.no_pairs) continue;
    ++valid;
    wins += r.report.cv_lovo < r.report.cv_base;
  }
  return {{"replications", results.size()},
          {"replications_with_pairs", valid},
          {"no_pairs", results.size() - valid},
          {"lovo_better", wins},
          {"lovo_better_fraction", valid ? double(wins) / double(valid) : 0.0},
          {"abstentions", reasons}};
}

// ---------------------------------------------------------------------------

int cmd_lemma_study(const std::string& lemmas, const std::string& grid_text, double p_fixed, std::size_t nodes,
                    std::size_t reps, std::uint64_t seed, std::size_t jobs, const fs::path& out) {
  const std::vector<double> grid = parse_grid(grid_text);
  std::vector<int> which;
  for (double l : parse_grid(lemmas)) {
    if (l != 2 && l != 3 && l != 4) throw DomainError("lemma must be 2, 3 or 4");
    which.push_back(int(l));
  }
  std::string csv = "lemma,parameter,value,replications,zero_fraction,mean_detected,mean_true_absent,expected_absent\n";
  for (int lemma : which)
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double v = grid[k];
      if (v < 0 || v > 1) throw DomainError("grid values must lie in [0, 1]");
      const LemmaStudyRow row = lemma == 2
                                    ? lemma_study_point(2, nodes, p_fixed, v, reps, derive_seed(seed, {2, k}), jobs)
                                    : lemma_study_point(lemma, nodes, v, 0.0, reps, derive_seed(seed, {std::uint64_t(lemma), k}), jobs);
      csv += std::to_string(row.lemma) + "," + row.parameter + "," + fmt(row.value) + "," +
             std::to_string(row.replications) + "," + fmt(row.zero_fraction) + "," + fmt(row.mean_detected) + "," +
             fmt(row.mean_true_absent) + "," + fmt(row.expected_absent) + "\n";
    }
  if (out.empty())
    std::cout << csv;
  else
    write_text(out / "lemma_study.csv", csv);
  return 0;
}

int cmd_crossval(const SimOptions& o) {
  StudyConfig cfg = o.study();
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    cfg.workdir = o.out;
  }
  const auto results = run_study(cfg);
  const json config = o.to_json();
  std::string scatter = kScatterHeader;
  for (const auto& r : results) {
    scatter += scatter_row(r);
    if (!o.out.empty())
      write_text(o.out / ("report_" + std::to_string(r.index) + ".json"),
                 report_to_json(r.report, config).dump(1) + "\n");
  }
  json summary = summarize(results);
  summary["config"] = config;
  if (o.out.empty()) {
    std::cout << scatter;
  } else {
    write_text(o.out / "scatter.csv", scatter);
    write_text(o.out / "summary.json", summary.dump(1) + "\n");
  }
  std::cerr << summary.dump() << "\n";
  return 0;
}

int cmd_correlate(const SimOptions& o, const std::string& grid_text) {
  StudyConfig base = o.study();
  if (base.mode.kind == ProviderMode::Kind::Oracle)
    throw DomainError("correlate needs --mode perturbed:K or adapter:CMD");
  const bool perturbed = base.mode.kind == ProviderMode::Kind::Perturbed;
  std::vector<double> grid = parse_grid(grid_text);
  std::vector<std::pair<CrossValReport, AccuracyMetrics>> all;
  std::string csv = std::string("grid_value,") + kScatterHeader;
  json per_point = json::array();
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    base.workdir = o.out;
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    StudyConfig cfg = base;
    cfg.seed = derive_seed(o.seed, {k});
    if (grid[k] < 0 || grid[k] != std::floor(grid[k])) throw DomainError("grid values must be non-negative integers");
    if (perturbed)
      cfg.mode.flips = static_cast<std::size_t>(grid[k]);
    else
      cfg.n_learn = static_cast<std::size_t>(grid[k]);
    const auto results = run_study(cfg);
    double cv = 0, shd_mean = 0;
    std::size_t used = 0;
    for (const auto& r : results) {
      csv += fmt(grid[k]) + "," + scatter_row(r);
      all.emplace_back(r.report, r.accuracy);
      if (std::isfinite(r.report.cv_lovo) && std::isfinite(r.accuracy.shd_sum)) {
        cv += r.report.cv_lovo;
        shd_mean += r.accuracy.shd_sum;
        ++used;
      }
    }
    per_point.push_back({{"grid_value", grid[k]},
                         {"mean_cv_lovo", used ? json(cv / double(used)) : json(nullptr)},
                         {"mean_shd_sum", used ? json(shd_mean / double(used)) : json(nullptr)},
                         {"replications_used", used}});
  }
  json summary;
  summary["config"] = o.to_json();
  summary["grid"] = perturbed ? "flips" : "n_learn";
  summary["points"] = per_point;
  if (all.size() >= 10) {
    const CorrelationStudy s = correlate_error_with_accuracy(all);
    summary["spearman_cv_vs_false_absence"] = spearman_json(s.vs_false_absence, s.reports_used_false_absence);
    summary["spearman_cv_vs_shd"] = spearman_json(s.vs_shd, s.reports_used_shd);
  } else {
    summary["spearman_cv_vs_false_absence"] = {{"undefined", "Undefined"}, {"detail", "fewer than 10 reports"}};
    summary["spearman_cv_vs_shd"] = summary["spearman_cv_vs_false_absence"];
  }
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_text(o.out / "correlation.csv", csv);
    write_text(o.out / "summary.json", summary.dump(1) + "\n");
  }
  std::cerr << summary.dump() << "\n";
  return 0;
}

struct FalsifyOptions {
  fs::path data;
  std::string discovery;
  double margin = 0.0;
  std::uint64_t seed = 0;
  std::string predictor = "parent";
  std::string baseline;
  std::string rule = "edge-type";
  std::size_t jobs = 1;
  fs::path out;
};

int cmd_falsify(const FalsifyOptions& o) {
  const Dataset data = read_csv(o.data);
  if (data.cols() < 3) throw DomainError("falsification needs at least 3 columns");
  if (data.rows() < 18) throw DomainError("falsification needs at least 18 rows");
  const std::size_t half = data.rows() / 2;
  CrossValConfig cv;
  cv.predictor = o.predictor == "lingam" ? Method::Lingam : Method::ParentAdjustment;
  const std::string base = o.baseline.empty() ? (o.predictor == "lingam" ? "maxent" : "random") : o.baseline;
  cv.baseline = base == "maxent" ? Method::MaxEnt : Method::RandomAdjustment;
  cv.rule = edge_rule_from_string(o.rule);
  cv.seed = o.seed;
  cv.jobs = o.jobs;
  const fs::path workdir = o.out.empty() ? fs::temp_directory_path() : o.out;
  fs::create_directories(workdir);
  const AdapterProvider provider(o.discovery, workdir, data.slice(0, half));
  const CrossValReport report = run_crossval(data.slice(half, data.rows()), provider, cv);
  std::string verdict = "inconclusive";
  if (!report.no_pairs) verdict = report.cv_lovo >= report.cv_base - o.margin ? "falsified" : "not falsified";
  json config = {{"data", o.data.string()}, {"discovery", o.discovery},     {"margin", o.margin},
                 {"seed", o.seed},          {"predictor", o.predictor},     {"baseline", base},
                 {"rule", o.rule},          {"learn_rows", half},           {"evaluation_rows", data.rows() - half}};
  json result = report_to_json(report, config);
  result["verdict"] = verdict;
  result["margin"] = o.margin;
  const std::string text = result.dump(1) + "\n";
  if (o.out.empty())
    std::cout << text;
  else
    write_text(o.out / "falsify.json", text);
  std::cerr << "verdict: " << verdict << " (cv_lovo " << fmt(report.cv_lovo) << ", cv_base " << fmt(report.cv_base)
            << ", pairs used " << report.pairs_used << ")\n";
  return 0;
}

int cmd_simulate(std::size_t nodes, double p, double q, std::size_t n, std::uint64_t seed, const fs::path& data_out,
                 const fs::path& graph_out, const fs::path& scm_out) {
  SimulationConfig sim;
  sim.nodes = nodes;
  sim.p = p;
  sim.q = q;
  sim.n = n;
  const Replication rep = simulate_replication(sim, seed);
  write_text(data_out, to_csv(rep.data));
  if (!graph_out.empty()) write_text(graph_out, graph_to_json(rep.joint).dump() + "\n");
  if (!scm_out.empty()) write_text(scm_out, scm_to_json(rep.scm).dump(1) + "\n");
  return 0;
}

Admg relabel(const Admg& g, const std::vector<NodeId>& names) {
  std::vector<NodePair> dir, bi;
  for (const auto& [a, b] : g.directed_edges()) dir.emplace_back(names[g.index(a)], names[g.index(b)]);
  for (const auto& [a, b] : g.bidirected_edges()) bi.emplace_back(names[g.index(a)], names[g.index(b)]);
  return Admg(names, dir, bi);
}

int cmd_adapter_oracle(const fs::path& graph, const fs::path& input, const fs::path& output) {
  const Admg truth = read_graph_file(graph).graph;
  const Dataset d = read_csv(input);
  std::vector<NodeId> drop;
  const NodeSet keep(d.columns().begin(), d.columns().end());
  for (const auto& c : d.columns())
    if (!truth.contains(c)) throw DomainError("column " + c + " is not in the graph");
  for (const auto& v : truth.nodes())
    if (!keep.count(v)) drop.push_back(v);
  write_graph_file(output, latent_project(truth, drop));
  return 0;
}

int cmd_adapter_random(const fs::path& input, const fs::path& output, double p, std::uint64_t seed) {
  const Dataset d = read_csv(input);
  GraphGenConfig cfg;
  cfg.node_count = d.cols();
  cfg.p = p;
  // the seed is mixed with the column set so the two marginals get different graphs
  std::uint64_t h = seed;
  for (const auto& c : d.columns()) h = derive_seed(h, {std::hash<std::string>{}(c)});
  cfg.seed = h;
  write_graph_file(output, relabel(generate_er_dag(cfg), d.columns()));
  return 0;
}

// Expands `--config FILE` into `--key value` pairs placed right after the
// subcommand, so flags given on the command line (later, TakeLast) win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::vector<std::string> out;
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw DomainError("cannot read config file " + *path);
  std::vector<std::string> injected;
  std::string line;
  auto trim = [](std::string t) {
    const auto b = t.find_first_not_of(" \t\r");
    const auto e = t.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key.rfind("--", 0) != 0) key = "--" + key;
    injected.push_back(key);
    injected.push_back(value);
  }
  // the subcommand is the first argument after the program name
  if (out.size() < 2) return out;
  out.insert(out.begin() + 2, injected.begin(), injected.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leave-one-variable-out falsification of causal discovery"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  app.footer("Simulation and falsify commands accept --config FILE: one key=value per line, keys are option names.");

  // lemma-study
  auto* lemma = app.add_subcommand("lemma-study", "How often the edge rules detect unlinked pairs in random graphs");
  std::string lemma_list = "2,3,4", lemma_grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  double lemma_p = 0.3;
  std::size_t lemma_nodes = 10, lemma_reps = 200, lemma_jobs = 1;
  std::uint64_t lemma_seed = 0;
  fs::path lemma_out;
  lemma->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  lemma->add_option("--lemma", lemma_list, "Comma-separated lemmas among 2,3,4");
  lemma->add_option("--grid", lemma_grid, "Values of p (lemmas 3,4) or q (lemma 2)");
  lemma->add_option("--p", lemma_p, "Directed edge probability for lemma 2")->check(CLI::Range(0.0, 1.0));
  lemma->add_option("--nodes", lemma_nodes, "Nodes per graph")->check(CLI::Range(2, 1000));
  lemma->add_option("--replications", lemma_reps, "Graphs per grid point")->check(CLI::Range(1, 10000000));
  lemma->add_option("--seed", lemma_seed, "Root seed")->envname("LOVO_SEED");
  lemma->add_option("--jobs", lemma_jobs, "Worker threads")->check(CLI::Range(1, 1024));
  lemma->add_option("--out", lemma_out, "Output directory (default: stdout)");

  // crossval
  auto* crossval = app.add_subcommand("crossval", "Cross-validate LOVO predictions against a baseline");
  SimOptions cv_opts;
  crossval->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cv_opts.attach(crossval, true);

  // correlate
  auto* correlate = app.add_subcommand("correlate", "Correlate LOVO error with marginal graph accuracy");
  SimOptions corr_opts;
  corr_opts.mode = "perturbed:0";
  corr_opts.replications = 75;
  std::string corr_grid = "0,2,4,8";
  correlate->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  corr_opts.attach(correlate, true);
  correlate->add_option("--grid", corr_grid, "Flips (perturbed mode) or n_learn values (adapter mode)");

  // falsify
  auto* falsify = app.add_subcommand("falsify", "Falsification test of a discovery algorithm on a CSV dataset");
  FalsifyOptions fo;
  falsify->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  falsify->add_option("--data", fo.data, "CSV with a header row")->required();
  falsify->add_option("--discovery", fo.discovery, "Command obeying the adapter protocol")->required();
  falsify->add_option("--margin", fo.margin, "Falsified iff cv_lovo >= cv_base - margin");
  falsify->add_option("--seed", fo.seed, "Root seed")->envname("LOVO_SEED");
  falsify->add_option("--predictor", fo.predictor)->check(CLI::IsMember({"parent", "lingam"}));
  falsify->add_option("--baseline", fo.baseline)->check(CLI::IsMember({"maxent", "random"}));
  falsify->add_option("--rule", fo.rule)->check(CLI::IsMember({"edge-type", "directed-part", "child-sibling"}));
  falsify->add_option("--jobs", fo.jobs)->check(CLI::Range(1, 1024));
  falsify->add_option("--out", fo.out, "Output directory (default: stdout)");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Sample a random graph, linear SCM and dataset");
  std::size_t sim_nodes = 10, sim_n = 5000;
  double sim_p = 0.3, sim_q = 0.0;
  std::uint64_t sim_seed = 0;
  fs::path sim_data, sim_graph, sim_scm;
  simulate_cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  simulate_cmd->add_option("--nodes", sim_nodes)->check(CLI::Range(2, 1000));
  simulate_cmd->add_option("--p", sim_p)->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--q", sim_q)->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("--n", sim_n)->check(CLI::Range(9, 100000000));
  simulate_cmd->add_option("--seed", sim_seed)->envname("LOVO_SEED");
  simulate_cmd->add_option("--data", sim_data, "Output CSV")->required();
  simulate_cmd->add_option("--graph", sim_graph, "Output joint graph JSON");
  simulate_cmd->add_option("--scm", sim_scm, "Output SCM JSON");

  // adapters used for testing the protocol end to end
  auto* oracle = app.add_subcommand("adapter-oracle", "Adapter returning the projection of a known graph");
  fs::path ao_graph, ao_input, ao_output;
  oracle->add_option("--graph", ao_graph)->required();
  oracle->add_option("--input", ao_input)->required();
  oracle->add_option("--output", ao_output)->required();

  auto* random = app.add_subcommand("adapter-random", "Adapter returning a random DAG over the columns");
  fs::path ar_input, ar_output;
  double ar_p = 0.3;
  std::uint64_t ar_seed = 0;
  random->add_option("--input", ar_input)->required();
  random->add_option("--output", ar_output)->required();
  random->add_option("--p", ar_p)->check(CLI::Range(0.0, 1.0));
  random->add_option("--seed", ar_seed)->envname("LOVO_SEED");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<char*> cargs;
  for (auto& a : args) cargs.push_back(a.data());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*lemma)
      return cmd_lemma_study(lemma_list, lemma_grid, lemma_p, lemma_nodes, lemma_reps, lemma_seed, lemma_jobs,
                             lemma_out);
    if (*crossval) return cmd_crossval(cv_opts);
    if (*correlate) return cmd_correlate(corr_opts, corr_grid);
    if (*falsify) return cmd_falsify(fo);
    if (*simulate_cmd) return cmd_simulate(sim_nodes, sim_p, sim_q, sim_n, sim_seed, sim_data, sim_graph, sim_scm);
    if (*oracle) return cmd_adapter_oracle(ao_graph, ao_input, ao_output);
    if (*random) return cmd_adapter_random(ar_input, ar_output, ar_p, ar_seed);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
