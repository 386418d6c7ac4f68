#include "lovo/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lovo/errors.hpp"

namespace lovo {

Dataset::Dataset(std::vector<NodeId> columns, Eigen::MatrixXd values)
    : columns_(std::move(columns)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.cols()) != columns_.size())
    throw DomainError("dataset: column count does not match header");
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].empty()) throw DomainError("dataset: empty column name");
    if (!index_.emplace(columns_[i], i).second) throw DomainError("dataset: duplicate column " + columns_[i]);
  }
  if (!values_.allFinite()) throw DomainError("dataset: non-finite value");
}

bool Dataset::has_column(std::string_view name) const { return index_.find(name) != index_.end(); }

std::size_t Dataset::column_index(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw DomainError("dataset: no column " + std::string(name));
  return it->second;
}

Eigen::VectorXd Dataset::column(std::string_view name) const { return values_.col(column_index(name)); }

Dataset Dataset::select(const std::vector<NodeId>& names) const {
  Eigen::MatrixXd out(values_.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) out.col(j) = values_.col(column_index(names[j]));
  return Dataset(names, std::move(out));
}

Dataset Dataset::without(const std::vector<NodeId>& names) const {
  std::vector<NodeId> keep;
  for (const auto& c : columns_)
    if (std::find(names.begin(), names.end(), c) == names.end()) keep.push_back(c);
  return select(keep);
}

Dataset Dataset::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > rows()) throw DomainError("dataset: row slice out of range");
  return Dataset(columns_, values_.middleRows(begin, end - begin));
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& values) {
  if (values.rows() < 2) throw DomainError("covariance needs at least two rows");
  Eigen::MatrixXd centered = values.rowwise() - values.colwise().mean();
  return (centered.adjoint() * centered) / double(values.rows() - 1);
}

double sample_covariance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 2) throw DomainError("covariance needs equal lengths >= 2");
  return ((a.array() - a.mean()) * (b.array() - b.mean())).sum() / double(a.size() - 1);
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return sample_covariance(a, b) / std::sqrt(sample_covariance(a, a) * sample_covariance(b, b));
}

Dataset standardize(const Dataset& d) {
  Eigen::MatrixXd v = d.values().rowwise() - d.values().colwise().mean();
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double sd = std::sqrt(v.col(j).squaredNorm() / double(v.rows() - 1));
    if (sd > 0) v.col(j) /= sd;
  }
  return Dataset(d.columns(), std::move(v));
}

std::size_t Moments::index(std::string_view n) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == n) return i;
  throw DomainError("moments: no variable " + std::string(n));
}

Moments Moments::select(const std::vector<NodeId>& keep) const {
  Moments out{keep, Eigen::MatrixXd(keep.size(), keep.size())};
  std::vector<std::size_t> idx;
  for (const auto& k : keep) idx.push_back(index(k));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) out.cov(i, j) = cov(idx[i], idx[j]);
  return out;
}

Moments moments_of(const Dataset& d) { return Moments{d.columns(), sample_covariance(d.values())}; }

std::string to_csv(const Dataset& d) {
  std::string out;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    if (j) out += ',';
    out += d.columns()[j];
  }
  out += '\n';
  char buf[64];
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", d.values()(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_csv(d);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  const auto b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

}  // namespace

Dataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("csv: empty input");
  std::vector<NodeId> header;
  for (auto& c : split_line(line)) header.push_back(trim(c));
  if (header.empty()) throw DomainError("csv: empty header");
  std::vector<double> flat;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw DomainError("csv: row " + std::to_string(rows + 2) + " has " + std::to_string(cells.size()) +
                        " cells, expected " + std::to_string(header.size()));
    for (auto& c : cells) {
      const std::string t = trim(c);
      double v = 0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw DomainError("csv: non-numeric cell '" + t + "' in row " + std::to_string(rows + 2));
      flat.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw DomainError("csv: no data rows");
  Eigen::MatrixXd values(rows, header.size());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < header.size(); ++j) values(i, j) = flat[i * header.size() + j];
  return Dataset(header, std::move(values));
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace lovo
