#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "lovo/dataset.hpp"
#include "lovo/errors.hpp"
#include "lovo/scm.hpp"

using namespace lovo;

namespace {

Admg random_dag(std::size_t d, double p, std::uint64_t seed) {
  GraphGenConfig cfg;
  cfg.node_count = d;
  cfg.p = p;
  cfg.seed = seed;
  return generate_er_dag(cfg);
}

}  // namespace

TEST(Csv, RoundTripIsBitExact) {
  Eigen::MatrixXd v(3, 2);
  v << 0.1, -1e-300, 1.0 / 3.0, 12345678.90123, -0.0, 2.5e17;
  const Dataset d({"a", "b"}, v);
  const Dataset back = parse_csv(to_csv(d));
  EXPECT_EQ(back.columns(), d.columns());
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j) EXPECT_EQ(back.values()(i, j), v(i, j));
}

TEST(Csv, RejectsMalformedInput) {
  EXPECT_THROW(parse_csv(""), DomainError);
  EXPECT_THROW(parse_csv("a,b\n"), DomainError);
  EXPECT_THROW(parse_csv("a,b\n1,2\n3\n"), DomainError);
  EXPECT_THROW(parse_csv("a,b\n1,x\n"), DomainError);
  EXPECT_THROW(parse_csv("a,a\n1,2\n"), DomainError);
  EXPECT_NO_THROW(parse_csv("a,b\n1,2\n3,4\n"));
}

TEST(DatasetTest, SelectSliceWithout) {
  Eigen::MatrixXd v(4, 3);
  v << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12;
  const Dataset d({"x", "y", "z"}, v);
  const Dataset s = d.select({"z", "x"});
  EXPECT_EQ(s.columns(), (std::vector<NodeId>{"z", "x"}));
  EXPECT_EQ(s.values()(1, 0), 6);
  const Dataset w = d.without({"y"});
  EXPECT_EQ(w.columns(), (std::vector<NodeId>{"x", "z"}));
  const Dataset sl = d.slice(1, 3);
  EXPECT_EQ(sl.rows(), 2u);
  EXPECT_EQ(sl.values()(0, 0), 4);
  EXPECT_THROW(d.column("q"), DomainError);
  EXPECT_THROW(d.slice(3, 5), DomainError);
  Eigen::MatrixXd bad(1, 1);
  bad << std::nan("");
  EXPECT_THROW(Dataset({"x"}, bad), DomainError);
}

TEST(DatasetTest, StandardizeAndPearson) {
  Eigen::MatrixXd v(5, 2);
  v << 1, 2, 2, 4.5, 3, 6, 4, 7.5, 5, 11;
  const Dataset s = standardize(Dataset({"a", "b"}, v));
  for (Eigen::Index j = 0; j < 2; ++j) {
    EXPECT_NEAR(s.values().col(j).mean(), 0.0, 1e-12);
    EXPECT_NEAR(sample_covariance(s.values().col(j), s.values().col(j)), 1.0, 1e-12);
  }
  EXPECT_NEAR(pearson(v.col(0), v.col(1)), sample_covariance(s.values().col(0), s.values().col(1)), 1e-12);
}

TEST(Noise, MomentsMatch) {
  Rng rng(11);
  for (const NoiseSpec spec : {NoiseSpec::uniform(0.7), NoiseSpec::shifted_exponential(2.0)}) {
    const int n = 400000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double e = spec.sample(rng);
      s1 += e;
      s2 += e * e;
    }
    const double sd = std::sqrt(spec.variance());
    EXPECT_NEAR(s1 / n, 0.0, 5 * sd / std::sqrt(n));
    EXPECT_NEAR(s2 / n, spec.variance(), 0.02 * spec.variance());
  }
  EXPECT_DOUBLE_EQ(NoiseSpec::uniform(3).variance(), 3.0);
  EXPECT_DOUBLE_EQ(NoiseSpec::shifted_exponential(0.5).variance(), 4.0);
}

TEST(Scm, ValidatesConstruction) {
  const Admg g({"A", "B"}, {{"A", "B"}});
  Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(2, 2);
  lam(1, 0) = 0.7;
  EXPECT_NO_THROW(LinearScm(g, lam, {NoiseSpec::uniform(1), NoiseSpec::uniform(1)}));
  Eigen::MatrixXd off = lam;
  off(0, 1) = 0.3;  // no B -> A edge
  EXPECT_THROW(LinearScm(g, off, {NoiseSpec::uniform(1), NoiseSpec::uniform(1)}), DomainError);
  EXPECT_THROW(LinearScm(g, lam, {NoiseSpec::uniform(1)}), DomainError);
  EXPECT_THROW(LinearScm(g, lam, {NoiseSpec::uniform(1), NoiseSpec::uniform(0)}), DomainError);
  const Admg confounded({"A", "B"}, {}, {{"A", "B"}});
  EXPECT_THROW(LinearScm(confounded, Eigen::MatrixXd::Zero(2, 2), {NoiseSpec::uniform(1), NoiseSpec::uniform(1)}),
               DomainError);
}

TEST(Scm, SampledCoefficientsAreFaithfulAndInRange) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Admg g = random_dag(8, 0.4, s);
    ScmGenConfig cfg;
    cfg.seed = 100 + s;
    const LinearScm scm = sample_structure(g, cfg);
    const Eigen::MatrixXd m = total_effects(scm);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double c = scm.lambda()(i, j);
        if (g.directed(j, i)) {
          EXPECT_GE(std::abs(c), 0.5);
          EXPECT_LE(std::abs(c), 1.0);
          EXPECT_GT(std::abs(m(i, j)), 1e-6);
        } else {
          EXPECT_EQ(c, 0.0);
        }
      }
    const LinearScm again = sample_structure(g, cfg);
    EXPECT_EQ(again.lambda(), scm.lambda());
  }
}

TEST(Scm, DegenerateStructureAfterRetryCap) {
  // every ±1 draw gives a total effect of X on Y in {-2, 0, 2}
  const Admg g({"X", "Y", "Z"}, {{"X", "Y"}, {"X", "Z"}, {"Z", "Y"}});
  ScmGenConfig cfg;
  cfg.coeff_low = cfg.coeff_high = 1.0;
  cfg.faithfulness_tolerance = 2.5;
  cfg.max_retries = 5;
  EXPECT_THROW(sample_structure(g, cfg), DegenerateStructureError);
}

TEST(Scm, PathSumsMatchInverse) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Admg g = random_dag(10, 0.35, s);
    ScmGenConfig cfg;
    cfg.seed = s;
    const LinearScm scm = sample_structure(g, cfg);
    EXPECT_LT((total_effects(scm) - mixing_matrix(scm)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Scm, AnalyticCovarianceOfChain) {
  const Admg g({"A", "B"}, {{"A", "B"}});
  Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(2, 2);
  lam(1, 0) = 0.5;
  const LinearScm scm(g, lam, {NoiseSpec::uniform(std::sqrt(3.0)), NoiseSpec::shifted_exponential(1.0)});
  const Moments m = analytic_covariance(scm);
  EXPECT_NEAR(m("A", "A"), 1.0, 1e-12);
  EXPECT_NEAR(m("A", "B"), 0.5, 1e-12);
  EXPECT_NEAR(m("B", "B"), 1.25, 1e-12);
}

TEST(Scm, SampleCovarianceConvergesAtRootN) {
  const Admg g = random_dag(6, 0.5, 3);
  ScmGenConfig cfg;
  cfg.seed = 5;
  const LinearScm scm = sample_structure(g, cfg);
  const Eigen::MatrixXd truth = analytic_covariance(scm).cov;
  const std::vector<std::size_t> sizes{1000, 10000, 100000};
  std::vector<double> err;
  for (std::size_t n : sizes) {
    double e = 0;
    const int reps = 8;
    for (int r = 0; r < reps; ++r) {
      const Dataset d = simulate(scm, n, derive_seed(77, {n, static_cast<std::uint64_t>(r)}));
      e += (sample_covariance(d.values()) - truth).norm();
    }
    err.push_back(e / reps);
  }
  const double slope = (std::log(err.back()) - std::log(err.front())) / (std::log(1e5) - std::log(1e3));
  EXPECT_GT(slope, -0.7);
  EXPECT_LT(slope, -0.3);
}

TEST(Scm, JsonRoundTrip) {
  ScmGenConfig cfg;
  cfg.seed = 9;
  cfg.noise = NoiseSpec::shifted_exponential(1.5);
  const LinearScm scm = sample_structure(random_dag(5, 0.5, 1), cfg);
  const LinearScm back = scm_from_json(scm_to_json(scm));
  EXPECT_EQ(back.graph(), scm.graph());
  EXPECT_EQ(back.lambda(), scm.lambda());
  EXPECT_EQ(back.noise(), scm.noise());
}

TEST(Scm, LatentAugmentationProjectsBack) {
  const Admg admg({"A", "B", "C"}, {{"A", "B"}}, {{"B", "C"}, {"A", "C"}});
  const auto [dag, latents] = augment_with_latents(admg);
  EXPECT_TRUE(dag.is_dag());
  EXPECT_EQ(latents.size(), 2u);
  EXPECT_EQ(latent_project(dag, latents), admg);
}

TEST(Witness, MarginalsAgreeAcrossCouplings) {
  WitnessConfig cfg;
  cfg.n = 50000;
  cfg.seed = 4;
  const auto all = ambiguity_witness_all(cfg);
  for (const auto& d : all) {
    EXPECT_EQ(d.column("X"), all[0].column("X"));
    EXPECT_EQ(d.column("Z"), all[0].column("Z"));
    // Y - bZ is Uniform[-hy, hy] and independent of Z under every coupling
    const Eigen::VectorXd r = d.column("Y") - d.column("Z");
    EXPECT_LE(r.cwiseAbs().maxCoeff(), 1.0);
    EXPECT_NEAR(sample_covariance(r, r), 1.0 / 3.0, 0.01);
    EXPECT_NEAR(pearson(r, d.column("Z")), 0.0, 0.02);
  }
  const double como = pearson(all[0].column("X"), all[0].column("Y"));
  const double indep = pearson(all[1].column("X"), all[1].column("Y"));
  const double anti = pearson(all[2].column("X"), all[2].column("Y"));
  // Var X = Var Y = 2/3, Cov = 1/3 ± 1/3
  EXPECT_NEAR(como, 1.0, 0.01);
  EXPECT_NEAR(indep, 0.5, 0.01);
  EXPECT_NEAR(anti, 0.0, 0.01);
}

TEST(Witness, ConstantZ) {
  WitnessConfig cfg;
  cfg.n = 20000;
  cfg.constant_z = true;
  const auto all = ambiguity_witness_all(cfg);
  EXPECT_EQ(all[0].column("Z").cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(pearson(all[0].column("X"), all[0].column("Y")), 1.0, 1e-12);
  EXPECT_NEAR(pearson(all[2].column("X"), all[2].column("Y")), -1.0, 1e-12);
}
