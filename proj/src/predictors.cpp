#include "lovo/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "lovo/scm.hpp"
#include "lovo/seeds.hpp"

namespace lovo {

using nlohmann::json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::ParentAdjustment:
      return "ParentAdjustment";
    case Method::Lingam:
      return "Lingam";
    case Method::TrivariateRow:
      return "TrivariateRow";
    case Method::MaxEnt:
      return "MaxEnt";
    case Method::RandomAdjustment:
      return "RandomAdjustment";
  }
  return "ParentAdjustment";
}

namespace {

Method method_from_string(std::string_view s) {
  for (Method m : {Method::ParentAdjustment, Method::Lingam, Method::TrivariateRow, Method::MaxEnt,
                   Method::RandomAdjustment})
    if (to_string(m) == s) return m;
  throw DomainError("unknown method: " + std::string(s));
}

AdjustmentProvenance provenance_from_string(std::string_view s) {
  for (auto p : {AdjustmentProvenance::UnionOfParents, AdjustmentProvenance::Full, AdjustmentProvenance::Random})
    if (to_string(p) == s) return p;
  throw DomainError("unknown provenance: " + std::string(s));
}

json estimate_to_json(const Estimate& e) {
  if (has_value(e)) return value_of(e);
  const auto& a = std::get<Abstained>(e);
  return json{{"abstained", std::string(to_string(a.reason))}, {"detail", a.detail}};
}

Estimate estimate_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  return Abstained{abstain_reason_from_string(j.at("abstained").get<std::string>()), j.value("detail", "")};
}

double clamp_unit(double r) { return std::clamp(r, -1.0, 1.0); }

Abstained abstain(AbstainReason r, std::string detail) { return Abstained{r, std::move(detail)}; }

void check_adjustment(const NodeId& x, const NodeId& y, const NodeSet& zs) {
  if (x == y) throw DomainError("x and y must differ");
  if (zs.count(x) || zs.count(y)) throw DomainError("adjustment set must not contain x or y");
}

Eigen::MatrixXd columns_of(const Dataset& d, const NodeSet& zs) {
  Eigen::MatrixXd out(d.rows(), zs.size());
  Eigen::Index j = 0;
  for (const auto& z : zs) out.col(j++) = d.column(z);
  return out;
}

}  // namespace

json record_to_json(const PredictionRecord& r) {
  json j;
  j["pair"] = {r.pair.first, r.pair.second};
  j["method"] = std::string(to_string(r.method));
  j["baseline"] = std::string(to_string(r.baseline));
  j["verdict"] = std::string(to_string(r.verdict));
  j["rho_lovo"] = estimate_to_json(r.rho_lovo);
  j["rho_base"] = estimate_to_json(r.rho_base);
  j["rho_holdout"] = std::isfinite(r.rho_holdout) ? json(r.rho_holdout) : json(nullptr);
  j["adjustment"] = r.adjustment.members;
  j["adjustment_provenance"] = std::string(to_string(r.adjustment.provenance));
  j["step2"] = r.step2;
  return j;
}

PredictionRecord record_from_json(const json& j) {
  PredictionRecord r;
  r.pair = {j.at("pair").at(0).get<std::string>(), j.at("pair").at(1).get<std::string>()};
  r.method = method_from_string(j.at("method").get<std::string>());
  r.baseline = method_from_string(j.at("baseline").get<std::string>());
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.rho_lovo = estimate_from_json(j.at("rho_lovo"));
  r.rho_base = estimate_from_json(j.at("rho_base"));
  const json& h = j.at("rho_holdout");
  r.rho_holdout = h.is_null() ? std::numeric_limits<double>::quiet_NaN() : h.get<double>();
  r.adjustment.members = j.at("adjustment").get<NodeSet>();
  r.adjustment.provenance = provenance_from_string(j.at("adjustment_provenance").get<std::string>());
  r.step2 = j.value("step2", "deterministic");
  return r;
}

// ---------------------------------------------------------------------------

void OlsRegressor::fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& target) {
  if (features.rows() != target.size() || target.size() == 0) throw DomainError("ols: shape mismatch");
  const double ymean = target.mean();
  if (features.cols() == 0) {
    slopes_.resize(0);
    intercept_ = ymean;
    return;
  }
  const Eigen::RowVectorXd means = features.colwise().mean();
  const Eigen::MatrixXd centered = features.rowwise() - means;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(centered);
  if (qr.rank() < centered.cols())
    throw AbstainError(abstain(AbstainReason::SingularAdjustment, "rank-deficient adjustment design"));
  slopes_ = qr.solve((target.array() - ymean).matrix());
  intercept_ = ymean - means.dot(slopes_);
}

Eigen::VectorXd OlsRegressor::predict(const Eigen::MatrixXd& features) const {
  if (features.cols() != slopes_.size()) throw DomainError("ols: feature count mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Constant(features.rows(), intercept_);
  if (slopes_.size() > 0) out += features * slopes_;
  return out;
}

Estimate three_step_parent_adjustment(const Dataset& dx, const Dataset& dy, const NodeId& x, const NodeId& y,
                                      const NodeSet& zs, Regressor* regressor) {
  check_adjustment(x, y, zs);
  for (const auto& z : zs)
    if (!dx.has_column(z) || !dy.has_column(z)) throw DomainError("adjustment variable " + z + " not shared");
  OlsRegressor ols;
  Regressor& reg = regressor ? *regressor : ols;
  try {
    // step 1: regression of Y on Z_S in the (Y, Z) sample
    reg.fit(columns_of(dy, zs), dy.column(y));
    // step 2: artificial (x, ŷ) pairs from the (X, Z) sample
    const Eigen::VectorXd yhat = reg.predict(columns_of(dx, zs));
    const Eigen::VectorXd xs = dx.column(x);
    // step 3: correlation, with the Y scale taken from the sample that observed Y
    const double sx = std::sqrt(sample_covariance(xs, xs));
    const Eigen::VectorXd ys = dy.column(y);
    const double sy = std::sqrt(sample_covariance(ys, ys));
    if (sx * sy < 1e-300) return abstain(AbstainReason::DegenerateDenominator, "zero variance");
    return clamp_unit(sample_covariance(xs, yhat) / (sx * sy));
  } catch (const AbstainError& e) {
    return e.abstained();
  }
}

Estimate adjustment_from_moments(const Moments& mx, const Moments& my, const NodeId& x, const NodeId& y,
                                 const NodeSet& zs) {
  check_adjustment(x, y, zs);
  const std::vector<NodeId> z(zs.begin(), zs.end());
  const double sxx = mx(x, x), syy = my(y, y);
  if (sxx * syy <= 0) return abstain(AbstainReason::DegenerateDenominator, "zero variance");
  if (z.empty()) return 0.0;
  const auto k = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXd szz(k, k);
  Eigen::VectorXd szy(k), sxz(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) szz(i, j) = my(z[i], z[j]);
    szy(i) = my(z[i], y);
    sxz(i) = mx(x, z[i]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(szz);
  if (qr.rank() < k) return abstain(AbstainReason::SingularAdjustment, "singular adjustment covariance");
  const Eigen::VectorXd beta = qr.solve(szy);
  return clamp_unit(sxz.dot(beta) / std::sqrt(sxx * syy));
}

NodeSet shared_columns(const Dataset& dx, const Dataset& dy, const NodeId& x, const NodeId& y) {
  NodeSet out;
  for (const auto& c : dx.columns())
    if (c != x && c != y && dy.has_column(c)) out.insert(c);
  return out;
}

Estimate maxent_baseline(const Dataset& dx, const Dataset& dy, const NodeId& x, const NodeId& y) {
  return three_step_parent_adjustment(dx, dy, x, y, shared_columns(dx, dy, x, y));
}

Estimate maxent_from_moments(const Moments& mx, const Moments& my, const NodeId& x, const NodeId& y) {
  NodeSet z;
  for (const auto& n : mx.names)
    if (n != x && n != y) z.insert(n);
  return adjustment_from_moments(mx, my, x, y, z);
}

Estimate random_adjustment_baseline(const Dataset& dx, const Dataset& dy, const NodeId& x, const NodeId& y,
                                    std::size_t size, std::size_t k_draws, std::uint64_t seed) {
  const NodeSet zset = shared_columns(dx, dy, x, y);
  if (size > zset.size()) throw DomainError("random adjustment size exceeds |Z|");
  if (k_draws == 0) throw DomainError("k_draws must be positive");
  std::vector<NodeId> z(zset.begin(), zset.end());
  Rng rng(seed);
  double sum = 0;
  std::size_t used = 0;
  Abstained last;
  for (std::size_t draw = 0; draw < k_draws; ++draw) {
    std::shuffle(z.begin(), z.end(), rng);
    const NodeSet pick(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(size));
    Estimate e = three_step_parent_adjustment(dx, dy, x, y, pick);
    if (has_value(e)) {
      sum += value_of(e);
      ++used;
    } else {
      last = std::get<Abstained>(e);
    }
  }
  if (used == 0) return last;
  return sum / double(used);
}

Estimate random_adjustment_from_moments(const Moments& mx, const Moments& my, const NodeId& x, const NodeId& y,
                                        std::size_t size) {
  std::vector<NodeId> z;
  for (const auto& n : mx.names)
    if (n != x && n != y) z.push_back(n);
  if (size > z.size()) throw DomainError("random adjustment size exceeds |Z|");
  std::vector<char> choose(z.size(), 0);
  std::fill(choose.begin(), choose.begin() + static_cast<std::ptrdiff_t>(size), 1);
  std::sort(choose.begin(), choose.end());
  double sum = 0;
  std::size_t used = 0;
  Abstained last;
  do {
    NodeSet pick;
    for (std::size_t i = 0; i < z.size(); ++i)
      if (choose[i]) pick.insert(z[i]);
    Estimate e = adjustment_from_moments(mx, my, x, y, pick);
    if (has_value(e)) {
      sum += value_of(e);
      ++used;
    } else {
      last = std::get<Abstained>(e);
    }
  } while (std::next_permutation(choose.begin(), choose.end()));
  if (used == 0) return last;
  return sum / double(used);
}

// ---------------------------------------------------------------------------
// LiNGAM predictor

bool lingam_theorem_exception(const Admg& joint, const NodeId& x, const NodeId& y) {
  auto check = [&](const NodeId& a, const NodeId& b) {
    // ch(a) = {b, C}, ch(b) = {C}
    const NodeSet ch_a = joint.children(a), ch_b = joint.children(b);
    if (ch_a.size() != 2 || !ch_a.count(b) || ch_b.size() != 1) return false;
    return ch_a.count(*ch_b.begin()) > 0;
  };
  return check(y, x) || check(x, y);
}

namespace {

// Second moments available to the predictor: x–Z from mx, y–Z from my, Z–Z
// averaged over both samples. The x–y entry is the unknown.
struct SplitMoments {
  const Moments& mx;
  const Moments& my;
  const NodeId& x;
  const NodeId& y;

  double operator()(const NodeId& a, const NodeId& b) const {
    const bool ax = a == x || b == x, ay = a == y || b == y;
    if (ax && ay) throw PreconditionError("cross moment is not observed");
    if (ax) return mx(a, b);
    if (ay) return my(a, b);
    return 0.5 * (mx(a, b) + my(a, b));
  }
};

// Structural identifiability of the parent route: rank of the instrument
// system under generic coefficients drawn for the joint graph.
bool parent_route_generic(const Admg& joint, const NodeId& x, const std::vector<NodeId>& q,
                          const std::vector<NodeId>& instruments) {
  if (instruments.size() < q.size() + 1) return false;
  ScmGenConfig cfg;
  cfg.seed = 0x5eed;
  cfg.coeff_low = 0.3;
  LinearScm generic = sample_structure(joint, cfg);
  Moments s = analytic_covariance(generic);
  Eigen::MatrixXd a(instruments.size(), q.size() + 1);
  for (std::size_t r = 0; r < instruments.size(); ++r) {
    a(r, 0) = s(x, instruments[r]);
    for (std::size_t k = 0; k < q.size(); ++k) a(r, k + 1) = s(q[k], instruments[r]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-8);
  return qr.rank() == a.cols();
}

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const char* what) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < a.cols()) throw AbstainError(abstain(AbstainReason::SingularRegression, what));
  return qr.solve(b);
}

LingamFit lingam_cause_first(const Moments& mx, const Moments& my, const Admg& g, const NodeId& x,
                             const NodeId& y) {
  const SplitMoments s{mx, my, x, y};
  const NodeSet de_y = descendants(g, y);
  std::vector<NodeId> q;
  for (const auto& p : g.parents(y))
    if (p != x) q.push_back(p);
  std::vector<NodeId> instruments;
  for (const auto& n : g.nodes())
    if (n != x && n != y && !de_y.count(n)) instruments.push_back(n);

  double cov_xy = 0;
  std::string route;
  if (parent_route_generic(g, x, q, instruments)) {
    // Cov(Y, A) = λ_yx Cov(X, A) + Σ λ_yq Cov(Q, A) for every non-descendant A of Y
    Eigen::MatrixXd a(instruments.size(), q.size() + 1);
    Eigen::VectorXd b(instruments.size());
    for (std::size_t r = 0; r < instruments.size(); ++r) {
      a(r, 0) = s(x, instruments[r]);
      for (std::size_t k = 0; k < q.size(); ++k) a(r, k + 1) = s(q[k], instruments[r]);
      b(r) = s(y, instruments[r]);
    }
    const Eigen::VectorXd lam = solve_checked(a, b, "instrument system");
    cov_xy = lam(0) * s(x, x);
    for (std::size_t k = 0; k < q.size(); ++k) cov_xy += lam(k + 1) * s(q[k], x);
    route = "parent";
  } else {
    // children C of Y that X does not point into: Cov(X, C) = Σ λ_cr Cov(X, R)
    double num = 0, den = 0;
    for (const auto& c : g.children(y)) {
      if (c == x || g.has_directed(x, c)) continue;
      const NodeSet pa_set = g.parents(c);
      const std::vector<NodeId> pa(pa_set.begin(), pa_set.end());
      Eigen::MatrixXd spp(pa.size(), pa.size());
      Eigen::VectorXd spc(pa.size());
      for (std::size_t i = 0; i < pa.size(); ++i) {
        for (std::size_t j = 0; j < pa.size(); ++j) spp(i, j) = s(pa[i], pa[j]);
        spc(i) = s(pa[i], c);
      }
      const Eigen::VectorXd lam = solve_checked(spp, spc, "child regression");
      double rest = s(x, c);
      double lam_cy = 0;
      for (std::size_t i = 0; i < pa.size(); ++i) {
        if (pa[i] == y)
          lam_cy = lam(i);
        else
          rest -= lam(i) * s(x, pa[i]);
      }
      num += lam_cy * rest;
      den += lam_cy * lam_cy;
    }
    if (den <= 0) throw AbstainError(abstain(AbstainReason::NoRecoveryRoute, "no instrument set and no child witness"));
    cov_xy = num / den;
    route = "child";
  }

  // complete the joint covariance and refit every structural equation
  const std::size_t d = g.size();
  Eigen::MatrixXd full(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const NodeId &a = g.name(i), &b = g.name(j);
      const bool cross = (a == x && b == y) || (a == y && b == x);
      full(i, j) = cross ? cov_xy : s(a, b);
    }
  LingamFit fit;
  fit.names = g.nodes();
  fit.lambda = Eigen::MatrixXd::Zero(d, d);
  fit.omega = Eigen::VectorXd::Zero(d);
  fit.cov_xy = cov_xy;
  fit.route = route;
  for (std::size_t v = 0; v < d; ++v) {
    const auto pa = g.parent_indices(v);
    double resid = full(v, v);
    if (!pa.empty()) {
      Eigen::MatrixXd spp(pa.size(), pa.size());
      Eigen::VectorXd spv(pa.size());
      for (std::size_t i = 0; i < pa.size(); ++i) {
        for (std::size_t j = 0; j < pa.size(); ++j) spp(i, j) = full(pa[i], pa[j]);
        spv(i) = full(pa[i], v);
      }
      const Eigen::VectorXd lam = solve_checked(spp, spv, "structural equation");
      for (std::size_t i = 0; i < pa.size(); ++i) fit.lambda(v, pa[i]) = lam(i);
      resid -= spv.dot(lam);
    }
    if (!(resid > 0)) throw AbstainError(abstain(AbstainReason::SingularRegression, "non-positive noise variance"));
    fit.omega(v) = resid;
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd m = (id - fit.lambda).partialPivLu().solve(id);
  const Eigen::MatrixXd sigma = m * fit.omega.asDiagonal() * m.transpose();
  const std::size_t ix = g.index(x), iy = g.index(y);
  fit.rho = clamp_unit(sigma(ix, iy) / std::sqrt(sigma(ix, ix) * sigma(iy, iy)));
  return fit;
}

}  // namespace

LingamFit lingam_from_moments(const Moments& mx, const Moments& my, const Admg& joint, const NodeId& x,
                              const NodeId& y) {
  if (!joint.is_dag()) throw DomainError("LiNGAM predictor needs a DAG joint");
  if (lingam_theorem_exception(joint, x, y))
    throw AbstainError(abstain(AbstainReason::TheoremException, "ch(Y) = {X, C}, ch(X) = {C} configuration"));
  if (joint.has_directed(x, y)) return lingam_cause_first(mx, my, joint, x, y);
  if (joint.has_directed(y, x)) return lingam_cause_first(my, mx, joint, y, x);
  throw PreconditionError("lingam_from_moments needs an x-y edge");
}

namespace {

template <class AbsentFn, class LinkedFn>
Estimate lingam_dispatch(const MarginalPair& mp, const EdgeDecision& decision, AbsentFn absent, LinkedFn linked) {
  if (decision.verdict == Verdict::Undecidable)
    return abstain(AbstainReason::Undecidable, "edge type between x and y not identified");
  try {
    const Admg joint = reconstruct_joint_directed(mp, decision);
    if (decision.verdict == Verdict::Absent) {
      if (lingam_theorem_exception(joint, mp.x, mp.y))
        return abstain(AbstainReason::TheoremException, "ch(Y) = {X, C}, ch(X) = {C} configuration");
      NodeSet zs = joint.parents(mp.x);
      const NodeSet py = joint.parents(mp.y);
      zs.insert(py.begin(), py.end());
      return absent(zs);
    }
    return linked(joint);
  } catch (const AbstainError& e) {
    return e.abstained();
  }
}

}  // namespace

Estimate lingam_lovo(const Dataset& dx, const Dataset& dy, const MarginalPair& mp, const EdgeDecision& decision) {
  return lingam_dispatch(
      mp, decision, [&](const NodeSet& zs) { return three_step_parent_adjustment(dx, dy, mp.x, mp.y, zs); },
      [&](const Admg& joint) -> Estimate {
        return lingam_from_moments(moments_of(dx), moments_of(dy), joint, mp.x, mp.y).rho;
      });
}

Estimate lingam_lovo_moments(const Moments& mx, const Moments& my, const MarginalPair& mp,
                             const EdgeDecision& decision) {
  return lingam_dispatch(
      mp, decision, [&](const NodeSet& zs) { return adjustment_from_moments(mx, my, mp.x, mp.y, zs); },
      [&](const Admg& joint) -> Estimate { return lingam_from_moments(mx, my, joint, mp.x, mp.y).rho; });
}

// ---------------------------------------------------------------------------
// Three-variable predictors

Admg trivariate_graph(int row) {
  static const std::array<std::array<NodePair, 2>, 12> kRows{{
      {{{"X", "Z"}, {"Z", "Y"}}},
      {{{"Z", "X"}, {"Z", "Y"}}},
      {{{"Z", "X"}, {"Y", "Z"}}},
      {{{"X", "Z"}, {"Y", "Z"}}},
      {{{"X", "Y"}, {"Y", "Z"}}},
      {{{"Y", "X"}, {"Y", "Z"}}},
      {{{"Y", "X"}, {"Z", "Y"}}},
      {{{"X", "Y"}, {"Z", "Y"}}},
      {{{"Y", "X"}, {"X", "Z"}}},
      {{{"X", "Y"}, {"X", "Z"}}},
      {{{"X", "Y"}, {"Z", "X"}}},
      {{{"Y", "X"}, {"Z", "X"}}},
  }};
  if (row < 1 || row > 12) throw DomainError("trivariate row must be 1..12");
  const auto& e = kRows[static_cast<std::size_t>(row - 1)];
  return Admg({"X", "Y", "Z"}, {e[0], e[1]});
}

Estimate trivariate_linear(const TrivariateStats& st, int row) {
  if (row < 1 || row > 12) throw DomainError("trivariate row must be 1..12");
  auto ratio = [](double num, double den) -> Estimate {
    if (std::abs(den) < kDenominatorTolerance)
      return abstain(AbstainReason::DegenerateDenominator, "|denominator| below tolerance");
    const double r = num / den;
    if (std::abs(r) > 1.0 + 1e-12)
      return abstain(AbstainReason::InfeasibleComposition, "ratio outside [-1, 1]");
    return clamp_unit(r);
  };
  if (row <= 3) return st.rho_xz * st.rho_yz;
  if (row == 4) return 0.0;
  if (row <= 7) return ratio(st.rho_xz, st.rho_yz);
  if (row == 8 || row == 12) return abstain(AbstainReason::NoRecoveryRoute, "collider at the predicted node");
  return ratio(st.rho_yz, st.rho_xz);
}

bool check_necessary_conditions(const TrivariateStats& st, int row) {
  if (row < 1 || row > 12) throw DomainError("trivariate row must be 1..12");
  if (std::abs(st.rho_xz) > 1 || std::abs(st.rho_yz) > 1) return false;
  if (row == 4 && st.rho_xz * st.rho_xz + st.rho_yz * st.rho_yz > 1) return false;
  if (row >= 5 && row <= 7 && std::abs(st.rho_xz) > std::abs(st.rho_yz)) return false;
  if (row >= 9 && row <= 11 && std::abs(st.rho_yz) > std::abs(st.rho_xz)) return false;
  if (row == 8 || row == 12) return true;
  const Estimate implied = trivariate_linear(st, row);
  if (!has_value(implied)) return true;
  Eigen::Matrix3d c;
  const double xy = value_of(implied);
  c << 1, xy, st.rho_xz, xy, 1, st.rho_yz, st.rho_xz, st.rho_yz, 1;
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(c).eigenvalues().minCoeff() >= -1e-12;
}

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd entries, double tolerance) : p_(std::move(entries)) {
  if (p_.size() == 0) throw DomainError("stochastic matrix must be non-empty");
  if ((p_.array() < -tolerance).any()) throw DomainError("stochastic matrix has negative entries");
  for (Eigen::Index j = 0; j < p_.cols(); ++j)
    if (std::abs(p_.col(j).sum() - 1.0) > tolerance) throw DomainError("stochastic matrix column does not sum to 1");
}

namespace {

constexpr double kNegativeSlack = 1e-8;

std::optional<Eigen::MatrixXd> well_conditioned_inverse(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DomainError("conditional matrix to invert must be square");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0) || sv(0) / smin > kConditionLimit) return std::nullopt;
  return a.inverse();
}

StochasticEstimate finish(Eigen::MatrixXd r) {
  if ((r.array() < -kNegativeSlack).any())
    return abstain(AbstainReason::InfeasibleComposition, "composition has negative probabilities");
  r = r.cwiseMax(0.0);
  for (Eigen::Index j = 0; j < r.cols(); ++j) r.col(j) /= r.col(j).sum();
  return StochasticMatrix(std::move(r));
}

}  // namespace

StochasticEstimate trivariate_stochastic(const StochasticMatrix& p_z_given_y, const StochasticMatrix& p_z_given_x) {
  if (p_z_given_y.entries().rows() != p_z_given_x.entries().rows())
    throw DomainError("P(Z|Y) and P(Z|X) must share the Z outcomes");
  auto inv = well_conditioned_inverse(p_z_given_y.entries());
  if (!inv) return abstain(AbstainReason::IllConditioned, "P(Z|Y) is near singular");
  return finish(*inv * p_z_given_x.entries());
}

StochasticEstimate trivariate_stochastic_mirrored(const StochasticMatrix& p_y_given_z,
                                                  const StochasticMatrix& p_x_given_z) {
  if (p_y_given_z.entries().cols() != p_x_given_z.entries().cols())
    throw DomainError("P(Y|Z) and P(X|Z) must share the Z outcomes");
  auto inv = well_conditioned_inverse(p_x_given_z.entries());
  if (!inv) return abstain(AbstainReason::IllConditioned, "P(X|Z) is near singular");
  return finish(p_y_given_z.entries() * *inv);
}

}  // namespace lovo
