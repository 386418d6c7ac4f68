#pragma once

#include <variant>
#include <vector>

#include "lovo/errors.hpp"

namespace lovo {

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided, Student-t approximation with n - 2 dof
};
using SpearmanEstimate = std::variant<SpearmanResult, Abstained>;

/// 1-based ranks; ties get the mean of the ranks they span.
std::vector<double> average_ranks(const std::vector<double>& xs);

/// Needs equal lengths >= 3. Constant input abstains with Undefined.
SpearmanEstimate spearman(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace lovo
