#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lovo/graph.hpp"

namespace lovo {

/// Column-named sample matrix (rows = samples). Columns are joined with graphs
/// by name, never by position.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<NodeId> columns, Eigen::MatrixXd values);

  std::size_t rows() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const { return columns_.size(); }
  const std::vector<NodeId>& columns() const { return columns_; }
  const Eigen::MatrixXd& values() const { return values_; }
  bool has_column(std::string_view name) const;
  std::size_t column_index(std::string_view name) const;
  Eigen::VectorXd column(std::string_view name) const;

  /// Columns in the requested order.
  Dataset select(const std::vector<NodeId>& names) const;
  Dataset without(const std::vector<NodeId>& names) const;
  /// Rows [begin, end).
  Dataset slice(std::size_t begin, std::size_t end) const;

 private:
  std::vector<NodeId> columns_;
  Eigen::MatrixXd values_;
  std::map<NodeId, std::size_t, std::less<>> index_;
};

/// Sample covariance (divisor n - 1) over the dataset's columns.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& values);
double sample_covariance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Zero mean, unit variance per column; returns a new dataset.
Dataset standardize(const Dataset& d);

/// Covariance matrix with named rows/columns.
struct Moments {
  std::vector<NodeId> names;
  Eigen::MatrixXd cov;

  std::size_t index(std::string_view n) const;
  double operator()(std::string_view a, std::string_view b) const { return cov(index(a), index(b)); }
  Moments select(const std::vector<NodeId>& keep) const;
};

Moments moments_of(const Dataset& d);

/// Header row of names, '.' decimal separator, '\n' line endings, %.17g values.
void write_csv(const std::filesystem::path& path, const Dataset& d);
std::string to_csv(const Dataset& d);
/// Throws DomainError on malformed input (ragged rows, non-numeric cells,
/// duplicate names, no rows).
Dataset read_csv(const std::filesystem::path& path);
Dataset parse_csv(const std::string& text);

}  // namespace lovo
