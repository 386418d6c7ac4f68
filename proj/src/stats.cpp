#include "lovo/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

namespace lovo {

std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = 0.5 * double(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

SpearmanEstimate spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw PreconditionError("spearman: length mismatch");
  if (xs.size() < 3) throw PreconditionError("spearman: needs at least 3 points");
  for (double v : xs)
    if (!std::isfinite(v)) throw DomainError("spearman: non-finite input");
  for (double v : ys)
    if (!std::isfinite(v)) throw DomainError("spearman: non-finite input");
  const auto rx = average_ranks(xs), ry = average_ranks(ys);
  const double n = double(xs.size());
  const double mean = (n + 1) / 2;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0 || syy == 0) return Abstained{AbstainReason::Undefined, "constant input"};
  const double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  SpearmanResult out{rho, 0.0};
  if (std::abs(rho) < 1.0) {
    const double dof = n - 2;
    const double t = rho * std::sqrt(dof / (1 - rho * rho));
    if (dof > 0) {
      boost::math::students_t dist(dof);
      out.p_value = 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    } else {
      out.p_value = 1.0;
    }
  }
  return out;
}

}  // namespace lovo
