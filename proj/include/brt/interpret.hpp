#pragma once

// Post-fit analytics for a BoostedModel: relative influence, centered partial
// dependence in one and two variables, and pairwise / overall interaction
// strength.
//
// Partial dependence is computed from its definition: for a value v of
// feature j, the model is evaluated on every learn record with x_j replaced
// by v and the predictions are averaged. Nothing is approximated through
// tree weights, so the brute-force loop in the tests is an exact oracle.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "brt/boosting.hpp"
#include "brt/dataset.hpp"
#include "brt/error.hpp"
#include "brt/numfmt.hpp"

namespace brt {

struct InfluenceReport {
  std::vector<std::string> feature_names;
  std::vector<double> percent;  // sums to 100

  // Feature indices by decreasing score; ties keep feature order.
  std::vector<std::size_t> ranking() const {
    std::vector<std::size_t> idx(percent.size());
    for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return percent[a] > percent[b]; });
    return idx;
  }
};

// Share of total split improvement credited to each feature, across all
// stages, in percent.
inline InfluenceReport relative_influence(const BoostedModel& model) {
  std::vector<double> totals(model.n_features(), 0.0);
  for (const Stage& s : model.stages()) {
    for (const TreeNode& n : s.tree.nodes()) {
      if (!n.is_leaf()) totals[n.split.feature] += n.split.improvement;
    }
  }
  double sum = 0.0;
  for (double t : totals) sum += t;
  if (!(sum > 0.0)) throw DegenerateModel("no splits to attribute");
  InfluenceReport report;
  report.feature_names = model.feature_names();
  for (double t : totals) report.percent.push_back(100.0 * t / sum);
  return report;
}

// Evaluation points for partial dependence: the sorted distinct observed
// values (default) or `count` evenly spaced points over the observed range.
struct GridSpec {
  enum class Kind { observed, linear };
  Kind kind = Kind::observed;
  std::size_t count = 0;

  static GridSpec observed() { return {}; }
  static GridSpec linear(std::size_t n) { return {Kind::linear, n}; }

  // "observed" or a point count >= 2.
  static GridSpec parse(const std::string& text) {
    if (text == "observed") return observed();
    auto n = parse_integer<std::size_t>(text);
    if (!n || *n < 2) throw InvalidArgument("grid must be 'observed' or a point count >= 2");
    return linear(*n);
  }
};

inline std::vector<double> feature_grid(const Dataset& data, std::size_t feature,
                                        const GridSpec& spec) {
  if (feature >= data.features.cols()) throw InvalidArgument("feature index out of range");
  std::vector<double> values;
  for (std::size_t i = 0; i < data.features.rows(); ++i) {
    const double v = data.features(i, feature);
    if (!is_missing(v)) values.push_back(v);
  }
  if (values.empty()) throw InvalidArgument("cannot grid a fully missing feature");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (spec.kind == GridSpec::Kind::observed) return values;
  if (spec.count < 2) throw InvalidArgument("linear grid needs at least 2 points");
  const double lo = values.front();
  const double hi = values.back();
  std::vector<double> grid(spec.count);
  for (std::size_t g = 0; g < spec.count; ++g) {
    grid[g] = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(spec.count - 1);
  }
  grid.back() = hi;
  return grid;
}

struct PDProfile {
  std::size_t feature = 0;
  std::vector<double> grid;
  std::vector<double> values;  // centered
};

struct PDSurface {
  std::size_t feature_j = 0;
  std::size_t feature_k = 0;
  std::vector<double> grid_j;
  std::vector<double> grid_k;
  std::vector<double> values;  // row-major |grid_j| x |grid_k|, centered

  double at(std::size_t a, std::size_t b) const { return values[a * grid_k.size() + b]; }
};

namespace detail {

// predict_batch split over row blocks; each row still sums its stages in order.
inline std::vector<double> predict_rows(const BoostedModel& model, const FeatureMatrix& x) {
  const std::size_t rows = x.rows();
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t work = rows * std::max<std::size_t>(1, model.stages().size());
  const std::size_t n_threads = std::min<std::size_t>(hw, work < 2000000 ? 1 : rows / 64 + 1);
  if (n_threads <= 1) return model.predict_batch(x);

  std::vector<double> out(rows);
  std::vector<std::jthread> pool;
  const std::size_t chunk = (rows + n_threads - 1) / n_threads;
  for (std::size_t t = 0; t < n_threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(rows, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      FeatureMatrix part(end - begin, x.cols());
      for (std::size_t i = begin; i < end; ++i) {
        std::copy(x.row(i).begin(), x.row(i).end(), part.row(i - begin).begin());
      }
      const std::vector<double> pred = model.predict_batch(part);
      std::copy(pred.begin(), pred.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
    });
  }
  pool.clear();
  return out;
}

// Mean prediction over all records for each override set. `overrides[q]`
// lists (feature, value) pairs applied to every record for query q.
inline std::vector<double> averaged_predictions(
    const BoostedModel& model, const FeatureMatrix& records,
    const std::vector<std::vector<std::pair<std::size_t, double>>>& overrides) {
  const std::size_t n = records.rows();
  FeatureMatrix x(overrides.size() * n, records.cols());
  for (std::size_t q = 0; q < overrides.size(); ++q) {
    for (std::size_t i = 0; i < n; ++i) {
      auto dst = x.row(q * n + i);
      std::copy(records.row(i).begin(), records.row(i).end(), dst.begin());
      for (const auto& [f, v] : overrides[q]) dst[f] = v;
    }
  }
  const std::vector<double> pred = predict_rows(model, x);
  std::vector<double> out(overrides.size());
  for (std::size_t q = 0; q < overrides.size(); ++q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += pred[q * n + i];
    out[q] = sum / static_cast<double>(n);
  }
  return out;
}

inline void center(std::vector<double>& v) {
  if (v.empty()) return;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

inline void check_pd_inputs(const BoostedModel& model, const Dataset& data) {
  if (data.features.rows() == 0) throw InvalidArgument("empty learn sample");
  if (data.features.cols() != model.n_features()) throw InvalidArgument("feature count mismatch");
}

}  // namespace detail

inline PDProfile partial_dependence_1d(const BoostedModel& model, std::size_t feature,
                                       const Dataset& data,
                                       const GridSpec& spec = GridSpec::observed()) {
  detail::check_pd_inputs(model, data);
  PDProfile p;
  p.feature = feature;
  p.grid = feature_grid(data, feature, spec);
  std::vector<std::vector<std::pair<std::size_t, double>>> q;
  for (double v : p.grid) q.push_back({{feature, v}});
  p.values = detail::averaged_predictions(model, data.features, q);
  detail::center(p.values);
  return p;
}

inline PDSurface partial_dependence_2d(const BoostedModel& model, std::size_t j, std::size_t k,
                                       const Dataset& data,
                                       const GridSpec& spec = GridSpec::observed()) {
  if (j == k) throw InvalidArgument("features must differ");
  detail::check_pd_inputs(model, data);
  PDSurface s;
  s.feature_j = j;
  s.feature_k = k;
  s.grid_j = feature_grid(data, j, spec);
  s.grid_k = feature_grid(data, k, spec);
  std::vector<std::vector<std::pair<std::size_t, double>>> q;
  for (double a : s.grid_j) {
    for (double b : s.grid_k) q.push_back({{j, a}, {k, b}});
  }
  s.values = detail::averaged_predictions(model, data.features, q);
  detail::center(s.values);
  return s;
}

// Denominator of the interaction score: variation of the fitted function over
// the learn records (model) or of the observed response (response).
enum class InteractionDenominator { model, response };

struct PairScore {
  std::size_t j = 0;  // j < k
  std::size_t k = 0;
  double score = 0.0;
};

struct InteractionReport {
  std::vector<std::string> feature_names;
  std::vector<PairScore> pairwise;  // every pair once, ordered by (j, k)
  std::vector<double> overall;      // per feature: sum of its pairwise scores

  double pair(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    for (const PairScore& p : pairwise) {
      if (p.j == a && p.k == b) return p.score;
    }
    throw InvalidArgument("no such feature pair");
  }

  // Pairs by decreasing score; ties keep (j, k) order.
  std::vector<PairScore> ranked_pairs() const {
    std::vector<PairScore> out = pairwise;
    std::stable_sort(out.begin(), out.end(),
                     [](const PairScore& a, const PairScore& b) { return a.score > b.score; });
    return out;
  }
};

// Interaction strength between feature pairs, measured at the learn records.
// For a pair (j, k) and record i, with every term centered over the records:
//
//   d_i = PD_jk(x_ij, x_ik) - PD_j(x_ij) - PD_k(x_ik)
//   score = 100 * sum_i d_i^2 / sum_i (F(x_i) - mean F)^2
//
// The one-variable dependences are shared between pairs, so they are
// computed once up front.
// Holds references: `model` and `data` must outlive the analyzer.
class InteractionAnalyzer {
 public:
  InteractionAnalyzer(const BoostedModel& model, const Dataset& data,
                      InteractionDenominator denominator = InteractionDenominator::model)
      : model_(model), data_(data) {
    detail::check_pd_inputs(model, data);
    const std::size_t n = data.features.rows();
    const std::size_t p = model.n_features();

    if (denominator == InteractionDenominator::model) {
      std::vector<double> fitted = detail::predict_rows(model, data.features);
      detail::center(fitted);
      for (double v : fitted) total_variation_ += v * v;
    } else {
      std::vector<double> y;
      for (double v : data.response) {
        if (!is_missing(v)) y.push_back(v);
      }
      detail::center(y);
      for (double v : y) total_variation_ += v * v;
    }
    if (!(total_variation_ > 0.0)) {
      throw DegenerateModel("degenerate model: no output variation");
    }

    std::vector<std::vector<std::pair<std::size_t, double>>> q;
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t i = 0; i < n; ++i) q.push_back({{j, data.features(i, j)}});
    }
    const std::vector<double> avg = detail::averaged_predictions(model, data.features, q);
    pd1_.assign(p, {});
    for (std::size_t j = 0; j < p; ++j) {
      pd1_[j].assign(avg.begin() + static_cast<std::ptrdiff_t>(j * n),
                     avg.begin() + static_cast<std::ptrdiff_t>((j + 1) * n));
      detail::center(pd1_[j]);
    }
  }

  double total_variation() const { return total_variation_; }

  double pairwise(std::size_t a, std::size_t b) const {
    return scores_for({{std::min(a, b), std::max(a, b)}}).front();
  }

  InteractionReport report() const {
    const std::size_t p = model_.n_features();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = j + 1; k < p; ++k) pairs.emplace_back(j, k);
    }
    const std::vector<double> scores = scores_for(pairs);
    InteractionReport r;
    r.feature_names = model_.feature_names();
    r.overall.assign(p, 0.0);
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      r.pairwise.push_back({pairs[q].first, pairs[q].second, scores[q]});
    }
    // Summed in (j, k) order so overall[j] is independent of evaluation order.
    for (std::size_t j = 0; j < p; ++j) {
      for (const PairScore& s : r.pairwise) {
        if (s.j == j || s.k == j) r.overall[j] += s.score;
      }
    }
    return r;
  }

 private:
  std::vector<double> scores_for(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) const {
    const std::size_t n = data_.features.rows();
    const std::size_t p = model_.n_features();
    std::vector<std::vector<std::pair<std::size_t, double>>> q;
    for (const auto& [j, k] : pairs) {
      if (j == k) throw InvalidArgument("features must differ");
      if (k >= p) throw InvalidArgument("feature index out of range");
      for (std::size_t i = 0; i < n; ++i) {
        q.push_back({{j, data_.features(i, j)}, {k, data_.features(i, k)}});
      }
    }
    const std::vector<double> avg = detail::averaged_predictions(model_, data_.features, q);
    std::vector<double> out;
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      const auto [j, k] = pairs[pi];
      std::vector<double> joint(avg.begin() + static_cast<std::ptrdiff_t>(pi * n),
                                avg.begin() + static_cast<std::ptrdiff_t>((pi + 1) * n));
      detail::center(joint);
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = joint[i] - pd1_[j][i] - pd1_[k][i];
        ss += d * d;
      }
      out.push_back(100.0 * ss / total_variation_);
    }
    return out;
  }

  const BoostedModel& model_;
  const Dataset& data_;
  double total_variation_ = 0.0;
  std::vector<std::vector<double>> pd1_;  // [feature][record], centered
};

inline double pairwise_interaction(const BoostedModel& model, std::size_t j, std::size_t k,
                                   const Dataset& data,
                                   InteractionDenominator denominator = InteractionDenominator::model) {
  if (j == k) throw InvalidArgument("features must differ");
  return InteractionAnalyzer(model, data, denominator).pairwise(j, k);
}

inline InteractionReport interaction_report(
    const BoostedModel& model, const Dataset& data,
    InteractionDenominator denominator = InteractionDenominator::model) {
  if (model.n_features() < 2) throw InvalidArgument("interaction needs at least 2 features");
  return InteractionAnalyzer(model, data, denominator).report();
}

inline std::vector<double> overall_interaction(
    const BoostedModel& model, const Dataset& data,
    InteractionDenominator denominator = InteractionDenominator::model) {
  return interaction_report(model, data, denominator).overall;
}

}  // namespace brt
