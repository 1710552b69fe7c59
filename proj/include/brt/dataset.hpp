#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brt/error.hpp"

namespace brt {

// Missing cells are quiet NaNs everywhere in the library.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

// Dense row-major matrix of predictor values.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  // Builds from nested rows; every row must have the same length.
  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    FeatureMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) {
        throw InvalidArgument("feature count mismatch");
      }
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

  void append_row(std::span<const double> r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw InvalidArgument("feature count mismatch");
    values_.insert(values_.end(), r.begin(), r.end());
    ++rows_;
  }

  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Rectangular learn sample: one row per fiscal year, a response and predictors.
struct Dataset {
  std::vector<std::string> feature_names;
  std::string response_name = "y";
  std::vector<int> years;  // optional row keys; empty when unkeyed
  std::vector<double> response;
  FeatureMatrix features;

  std::size_t rows() const { return response.size(); }
  std::size_t n_features() const { return feature_names.size(); }

  // Index of a named predictor, or npos.
  std::size_t feature_index(const std::string& name) const {
    for (std::size_t j = 0; j < feature_names.size(); ++j) {
      if (feature_names[j] == name) return j;
    }
    return npos;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Convenience for tests and toys: columns named x1..xp, no year keys.
inline Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                            std::vector<double> response) {
  Dataset d;
  d.features = FeatureMatrix::from_rows(rows);
  if (d.features.rows() != response.size()) {
    throw InvalidArgument("response length does not match sample count");
  }
  for (std::size_t j = 0; j < d.features.cols(); ++j) {
    d.feature_names.push_back("x" + std::to_string(j + 1));
  }
  d.response = std::move(response);
  return d;
}

}  // namespace brt
