#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lovo/edge_rules.hpp"
#include "lovo/graph_json.hpp"
#include "lovo/harness.hpp"
#include "lovo/predictors.hpp"
#include "lovo/stats.hpp"

namespace py = pybind11;
using namespace lovo;

namespace {

// Graphs and reports cross the boundary as plain dicts through the json module.
nlohmann::json to_json(const py::object& obj) {
  const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return nlohmann::json::parse(text);
}

py::object from_json(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::object estimate(const Estimate& e) {
  if (has_value(e)) return py::float_(value_of(e));
  return py::cast(std::get<Abstained>(e));
}

Dataset dataset(const Eigen::MatrixXd& values, const std::vector<std::string>& columns) {
  return Dataset(columns, values);
}

EdgeRule rule_of(const std::string& s) { return edge_rule_from_string(s); }

}  // namespace

PYBIND11_MODULE(_lovo, m) {
  m.doc() = "Leave-one-variable-out falsification of causal discovery output";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_ValueError);

  py::class_<Abstained>(m, "Abstained")
      .def_property_readonly("reason", [](const Abstained& a) { return std::string(to_string(a.reason)); })
      .def_readonly("detail", &Abstained::detail)
      .def("__bool__", [](const Abstained&) { return false; })
      .def("__repr__", [](const Abstained& a) {
        return "Abstained(" + std::string(to_string(a.reason)) + (a.detail.empty() ? "" : ": " + a.detail) + ")";
      });

  m.def(
      "latent_project",
      [](const py::object& graph, const std::vector<std::string>& drop) {
        return from_json(graph_to_json(latent_project(graph_from_json(to_json(graph)), drop)));
      },
      py::arg("graph"), py::arg("drop"));

  m.def(
      "m_separated",
      [](const py::object& graph, const std::string& a, const std::string& b, const std::set<std::string>& given) {
        return m_separated(graph_from_json(to_json(graph)), a, b, given);
      },
      py::arg("graph"), py::arg("a"), py::arg("b"), py::arg("given") = std::set<std::string>{});

  m.def(
      "decide_edge",
      [](const py::object& gx, const py::object& gy, const std::string& x, const std::string& y,
         const std::string& rule) {
        const GraphDocument dx = graph_document_from_json(to_json(gx));
        const GraphDocument dy = graph_document_from_json(to_json(gy));
        const MarginalPair mp{dx.graph, dy.graph, x, y};
        mp.validate();
        const auto conv = dx.convention.value_or(dy.convention.value_or(GraphConvention::ConfoundedLinks));
        return from_json(decision_to_json(decide_edge(mp, rule_of(rule), conv)));
      },
      py::arg("gx"), py::arg("gy"), py::arg("x"), py::arg("y"), py::arg("rule") = "edge-type",
      "Verdict on the X-Y link from the two leave-one-out graphs.");

  m.def(
      "parent_adjustment",
      [](const Eigen::MatrixXd& dx, const std::vector<std::string>& cols_x, const Eigen::MatrixXd& dy,
         const std::vector<std::string>& cols_y, const std::string& x, const std::string& y,
         const std::set<std::string>& zs) {
        return estimate(three_step_parent_adjustment(dataset(dx, cols_x), dataset(dy, cols_y), x, y, zs));
      },
      py::arg("dx"), py::arg("columns_x"), py::arg("dy"), py::arg("columns_y"), py::arg("x"), py::arg("y"),
      py::arg("zs"));

  m.def(
      "maxent",
      [](const Eigen::MatrixXd& dx, const std::vector<std::string>& cols_x, const Eigen::MatrixXd& dy,
         const std::vector<std::string>& cols_y, const std::string& x, const std::string& y) {
        return estimate(maxent_baseline(dataset(dx, cols_x), dataset(dy, cols_y), x, y));
      },
      py::arg("dx"), py::arg("columns_x"), py::arg("dy"), py::arg("columns_y"), py::arg("x"), py::arg("y"));

  m.def(
      "simulate",
      [](std::size_t nodes, double p, double q, std::size_t n, std::uint64_t seed) {
        SimulationConfig sim;
        sim.nodes = nodes;
        sim.p = p;
        sim.q = q;
        sim.n = n;
        sim.validate();
        const Replication rep = simulate_replication(sim, seed);
        return py::make_tuple(rep.data.columns(), rep.data.values(), from_json(graph_to_json(rep.joint)));
      },
      py::arg("nodes") = 10, py::arg("p") = 0.3, py::arg("q") = 0.0, py::arg("n") = 5000, py::arg("seed") = 0,
      "Returns (columns, samples, joint graph).");

  m.def(
      "crossval",
      [](const Eigen::MatrixXd& data, const std::vector<std::string>& columns, const py::object& joint,
         std::size_t flips, const std::string& predictor, const std::string& baseline, const std::string& rule,
         std::uint64_t seed, std::size_t jobs) {
        CrossValConfig cfg;
        if (predictor == "parent") {
          cfg.predictor = Method::ParentAdjustment;
        } else if (predictor == "lingam") {
          cfg.predictor = Method::Lingam;
        } else {
          throw DomainError("unknown predictor: " + predictor);
        }
        if (baseline == "random") {
          cfg.baseline = Method::RandomAdjustment;
        } else if (baseline == "maxent") {
          cfg.baseline = Method::MaxEnt;
        } else {
          throw DomainError("unknown baseline: " + baseline);
        }
        cfg.rule = rule_of(rule);
        cfg.seed = seed;
        cfg.jobs = jobs;
        const Admg g = graph_from_json(to_json(joint));
        const Dataset d = dataset(data, columns);
        CrossValReport report;
        {
          py::gil_scoped_release release;
          if (flips == 0) {
            report = run_crossval(d, OracleProvider(g), cfg);
          } else {
            report = run_crossval(d, PerturbedProvider(g, flips, seed), cfg);
          }
        }
        return from_json(report_to_json(report));
      },
      py::arg("data"), py::arg("columns"), py::arg("joint"), py::arg("flips") = 0, py::arg("predictor") = "parent",
      py::arg("baseline") = "random", py::arg("rule") = "edge-type", py::arg("seed") = 0, py::arg("jobs") = 1,
      "Cross-validation with oracle (flips=0) or perturbed marginal graphs of `joint`.");

  m.def(
      "lemma_study_point",
      [](int lemma, std::size_t nodes, double p, double q, std::size_t replications, std::uint64_t seed) {
        LemmaStudyRow row;
        {
          py::gil_scoped_release release;
          row = lemma_study_point(lemma, nodes, p, q, replications, seed);
        }
        py::dict out;
        out["lemma"] = row.lemma;
        out["parameter"] = row.parameter;
        out["value"] = row.value;
        out["replications"] = row.replications;
        out["zero_fraction"] = row.zero_fraction;
        out["mean_detected"] = row.mean_detected;
        out["mean_true_absent"] = row.mean_true_absent;
        out["expected_absent"] = row.expected_absent;
        return out;
      },
      py::arg("lemma"), py::arg("nodes"), py::arg("p"), py::arg("q") = 0.0, py::arg("replications") = 200,
      py::arg("seed") = 0);

  m.def(
      "spearman",
      [](const std::vector<double>& a, const std::vector<double>& b) -> py::object {
        const SpearmanEstimate s = spearman(a, b);
        if (const auto* r = std::get_if<SpearmanResult>(&s)) return py::make_tuple(r->rho, r->p_value);
        return py::cast(std::get<Abstained>(s));
      },
      py::arg("a"), py::arg("b"));
}
