#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <string_view>

#include "brt/error.hpp"

namespace brt {

struct LineSearchResult {
  double gamma = 1.0;
  // Set when the tree outputs are all zero; gamma is then 1 and the stage
  // contributes nothing.
  bool degenerate = false;
};

// Closed-form minimizer of sum (r_i - gamma * h_i)^2.
inline LineSearchResult line_search_gamma(std::span<const double> residuals,
                                          std::span<const double> tree_outputs) {
  if (residuals.empty() || residuals.size() != tree_outputs.size()) {
    throw InvalidArgument("line search needs equal nonzero lengths");
  }
  double cross = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    cross += residuals[i] * tree_outputs[i];
    norm += tree_outputs[i] * tree_outputs[i];
  }
  if (norm == 0.0) return {1.0, true};
  return {cross / norm, false};
}

template <typename L>
concept RegressionLoss = requires(const L& loss, double y, double f, std::span<const double> v) {
  { L::name } -> std::convertible_to<std::string_view>;
  { loss.value(y, f) } -> std::convertible_to<double>;
  { loss.negative_gradient(y, f) } -> std::convertible_to<double>;
  { loss.initial_constant(v) } -> std::convertible_to<double>;
  { loss.line_search(v, v) } -> std::same_as<LineSearchResult>;
};

struct LeastSquaresLoss {
  static constexpr std::string_view name = "least_squares";

  double value(double y, double f) const { return (y - f) * (y - f); }

  // Residual; the factor 2 of the true gradient is absorbed by the line search.
  double negative_gradient(double y, double f) const { return y - f; }

  double initial_constant(std::span<const double> y) const {
    double sum = 0.0;
    for (double v : y) sum += v;
    return sum / static_cast<double>(y.size());
  }

  LineSearchResult line_search(std::span<const double> residuals,
                               std::span<const double> tree_outputs) const {
    return line_search_gamma(residuals, tree_outputs);
  }
};

static_assert(RegressionLoss<LeastSquaresLoss>);

}  // namespace brt
