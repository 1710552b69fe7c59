#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brt/error.hpp"
#include "brt/numfmt.hpp"

namespace brt {

// How the continuous response is split into positives for the ROC area.
// Positives are actual values strictly above the threshold.
struct RocThreshold {
  enum class Kind { median, mean, value };
  Kind kind = Kind::median;
  double value = 0.0;

  static RocThreshold median() { return {}; }
  static RocThreshold mean() { return {Kind::mean, 0.0}; }
  static RocThreshold fixed(double v) { return {Kind::value, v}; }

  // "median", "mean" or "value:<x>".
  static RocThreshold parse(const std::string& text) {
    if (text == "median") return median();
    if (text == "mean") return mean();
    if (text.rfind("value:", 0) == 0) {
      if (auto v = parse_double(std::string_view(text).substr(6))) return fixed(*v);
    }
    throw InvalidArgument("roc threshold must be median, mean or value:<x>");
  }
};

struct FitReport {
  std::size_t n = 0;
  double mse = 0.0;
  double mad = 0.0;
  std::optional<double> r_squared;  // empty when the actual values have no variance
  std::optional<double> roc_auc;    // empty when one class is empty after binarizing
};

inline double median_of(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  return n % 2 == 1 ? s[n / 2] : (s[n / 2 - 1] + s[n / 2]) / 2.0;
}

// Mann-Whitney area: probability a positive outscores a negative, ties half.
inline std::optional<double> rank_auc(std::span<const double> scores,
                                      std::span<const unsigned char> positive) {
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (positive[order[k]]) {
        rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

inline FitReport fit_report(std::span<const double> actual, std::span<const double> predicted,
                            RocThreshold threshold = RocThreshold::median()) {
  if (actual.empty() || actual.size() != predicted.size()) {
    throw InvalidArgument("actual and predicted must have equal nonzero lengths");
  }
  const std::size_t n = actual.size();
  const double nn = static_cast<double>(n);
  FitReport r;
  r.n = n;

  double sse = 0.0;
  double sad = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = actual[i] - predicted[i];
    sse += e * e;
    sad += std::abs(e);
    mean += actual[i];
  }
  mean /= nn;
  r.mse = sse / nn;
  r.mad = sad / nn;

  double sst = 0.0;
  for (double a : actual) sst += (a - mean) * (a - mean);
  if (sst > 0.0) r.r_squared = 1.0 - sse / sst;

  double cut = 0.0;
  switch (threshold.kind) {
    case RocThreshold::Kind::median: cut = median_of(actual); break;
    case RocThreshold::Kind::mean: cut = mean; break;
    case RocThreshold::Kind::value: cut = threshold.value; break;
  }
  std::vector<unsigned char> positive(n);
  for (std::size_t i = 0; i < n; ++i) positive[i] = actual[i] > cut;
  r.roc_auc = rank_auc(predicted, positive);
  return r;
}

}  // namespace brt
