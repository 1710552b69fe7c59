#pragma once

// Stagewise least-squares gradient boosting with shrinkage and stochastic
// subsampling.
//
//   F_0     = mean response
//   r_i     = y_i - F_{m-1}(x_i)            on a subsample drawn without replacement
//   h_m     = regression tree fit to r       (best-first, bounded node budget)
//   gamma_m = sum r_i h_i / sum h_i^2        (closed-form line search)
//   F_m     = F_{m-1} + learn_rate * gamma_m * h_m
//
// Predictions always accumulate stages in order starting from F_0, so any
// caller that sums the same way (training, staged curves, batch prediction)
// reproduces the same bits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brt/dataset.hpp"
#include "brt/error.hpp"
#include "brt/loss.hpp"
#include "brt/sampling.hpp"
#include "brt/tree.hpp"

namespace brt {

enum class LossKind { least_squares };

// Calibration of a boosting run. Defaults are the 50k-tree, slow-learning,
// six-node configuration used for the food-inflation model.
struct BoostConfig {
  std::size_t n_trees = 50000;
  double learn_rate = 0.0001;
  std::size_t max_nodes = 6;
  std::size_t min_leaf_obs = 3;
  double subsample_fraction = 0.95;
  LossKind loss = LossKind::least_squares;
  std::uint64_t seed = 1;

  // learn_rate 0 is accepted so the shrinkage limit can be exercised.
  void validate() const {
    if (!(learn_rate >= 0.0 && learn_rate <= 1.0)) {
      throw InvalidArgument("learn_rate must lie in [0, 1]");
    }
    if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0)) {
      throw InvalidArgument("subsample_fraction must lie in (0, 1]");
    }
    tree_params().validate();
  }

  TreeParams tree_params() const { return {max_nodes, min_leaf_obs}; }
};

struct Stage {
  RegressionTree tree;
  double gamma = 1.0;
};

// Immutable fitted ensemble.
class BoostedModel {
 public:
  BoostedModel(double f0, std::vector<Stage> stages, BoostConfig config,
               std::vector<std::string> feature_names)
      : f0_(f0),
        stages_(std::move(stages)),
        config_(config),
        feature_names_(std::move(feature_names)) {
    for (const Stage& s : stages_) {
      if (s.tree.n_features() != feature_names_.size()) {
        throw InvalidArgument("feature count mismatch");
      }
    }
  }

  double f0() const { return f0_; }
  const std::vector<Stage>& stages() const { return stages_; }
  const BoostConfig& config() const { return config_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  std::size_t n_features() const { return feature_names_.size(); }

  double predict(std::span<const double> sample,
                 std::optional<std::size_t> n_stages = std::nullopt) const {
    if (sample.size() != n_features()) throw InvalidArgument("feature count mismatch");
    const std::size_t used = checked_stage_count(n_stages);
    double acc = f0_;
    for (std::size_t m = 0; m < used; ++m) {
      acc += config_.learn_rate * stages_[m].gamma * stages_[m].tree.predict_unchecked(sample.data());
    }
    return acc;
  }

  // Same per-row summation order as predict(); stage-major for locality.
  std::vector<double> predict_batch(const FeatureMatrix& x,
                                    std::optional<std::size_t> n_stages = std::nullopt) const {
    if (x.rows() > 0 && x.cols() != n_features()) throw InvalidArgument("feature count mismatch");
    const std::size_t used = checked_stage_count(n_stages);
    std::vector<double> out(x.rows(), f0_);
    for (std::size_t m = 0; m < used; ++m) {
      const double scale = config_.learn_rate * stages_[m].gamma;
      const RegressionTree& tree = stages_[m].tree;
      for (std::size_t i = 0; i < x.rows(); ++i) {
        out[i] += scale * tree.predict_unchecked(x.row(i).data());
      }
    }
    return out;
  }

 private:
  std::size_t checked_stage_count(std::optional<std::size_t> n_stages) const {
    if (!n_stages) return stages_.size();
    if (*n_stages > stages_.size()) {
      throw InvalidArgument("n_stages exceeds the number of fitted stages");
    }
    return *n_stages;
  }

  double f0_ = 0.0;
  std::vector<Stage> stages_;
  BoostConfig config_;
  std::vector<std::string> feature_names_;
};

// Called after each completed stage with (stage index, total stages).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

template <RegressionLoss Loss = LeastSquaresLoss>
BoostedModel fit_ensemble(const Dataset& data, const BoostConfig& config, const Loss& loss = {},
                          const ProgressFn& progress = {}) {
  config.validate();
  if (data.rows() == 0 || data.features.rows() != data.rows()) {
    throw InvalidArgument("empty learn sample");
  }
  if (data.features.cols() != data.n_features()) throw InvalidArgument("feature count mismatch");

  std::vector<std::size_t> usable;
  std::vector<double> usable_y;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (!is_missing(data.response[i])) {
      usable.push_back(i);
      usable_y.push_back(data.response[i]);
    }
  }
  if (usable.empty()) throw InvalidArgument("no usable response values");
  if (usable.size() < 2) throw InvalidArgument("empty learn sample");

  const double f0 = loss.initial_constant(usable_y);
  const double learn_rate = config.learn_rate;
  const std::size_t k = subsample_size(usable.size(), config.subsample_fraction);

  std::vector<double> current(data.rows(), f0);
  std::vector<double> residual(data.rows(), 0.0);
  std::vector<double> sample_residual;
  std::vector<double> sample_output;
  std::vector<Stage> stages;
  stages.reserve(config.n_trees);

  RandomStream rng(config.seed);
  TreeFitter fitter(config.tree_params());

  for (std::size_t m = 0; m < config.n_trees; ++m) {
    const std::vector<std::size_t> sample = draw_without_replacement(usable, k, rng);
    for (std::size_t i : sample) residual[i] = loss.negative_gradient(data.response[i], current[i]);

    RegressionTree tree = fitter.fit(data.features, residual, sample);

    sample_residual.clear();
    sample_output.clear();
    for (std::size_t i : sample) {
      sample_residual.push_back(residual[i]);
      sample_output.push_back(tree.predict_unchecked(data.features.row(i).data()));
    }
    const double gamma = loss.line_search(sample_residual, sample_output).gamma;

    for (std::size_t i : usable) {
      current[i] += learn_rate * gamma * tree.predict_unchecked(data.features.row(i).data());
    }
    stages.push_back({std::move(tree), gamma});
    if (progress) progress(m + 1, config.n_trees);
  }

  return BoostedModel(f0, std::move(stages), config, data.feature_names);
}

enum class StagedMetricKind { mse, r2 };

struct StagedPoint {
  std::size_t n_trees = 0;
  double value = 0.0;
};

struct StagedCurve {
  std::vector<StagedPoint> points;
};

inline std::size_t default_stage_stride(std::size_t n_trees) {
  return std::max<std::size_t>(1, n_trees / 500);
}

// Metric after k = stride, 2*stride, ..., and always the final stage count.
// One incremental pass over the stages. Rows with a missing response are
// ignored; r2 is NaN when the response has no variance.
inline StagedCurve staged_metric(const BoostedModel& model, const Dataset& data,
                                 StagedMetricKind metric, std::size_t stride) {
  if (stride == 0) throw InvalidArgument("stride must be at least 1");
  if (data.n_features() != model.n_features() || data.features.cols() != model.n_features()) {
    throw InvalidArgument("feature count mismatch");
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (!is_missing(data.response[i])) rows.push_back(i);
  }
  double sst = 0.0;
  if (!rows.empty()) {
    double mean = 0.0;
    for (std::size_t i : rows) mean += data.response[i];
    mean /= static_cast<double>(rows.size());
    for (std::size_t i : rows) sst += (data.response[i] - mean) * (data.response[i] - mean);
  }

  std::vector<double> pred(data.rows(), model.f0());
  auto evaluate = [&]() {
    double sse = 0.0;
    for (std::size_t i : rows) sse += (data.response[i] - pred[i]) * (data.response[i] - pred[i]);
    if (metric == StagedMetricKind::mse) {
      return rows.empty() ? 0.0 : sse / static_cast<double>(rows.size());
    }
    return sst > 0.0 ? 1.0 - sse / sst : std::nan("");
  };

  StagedCurve curve;
  const auto& stages = model.stages();
  const double learn_rate = model.config().learn_rate;
  for (std::size_t m = 0; m < stages.size(); ++m) {
    for (std::size_t i : rows) {
      pred[i] += learn_rate * stages[m].gamma *
                 stages[m].tree.predict_unchecked(data.features.row(i).data());
    }
    const std::size_t used = m + 1;
    if (used % stride == 0 || used == stages.size()) curve.points.push_back({used, evaluate()});
  }
  return curve;
}

}  // namespace brt
