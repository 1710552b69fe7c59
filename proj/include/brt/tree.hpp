#pragma once

// Least-squares regression trees of bounded size: the weak learner of the
// boosted ensemble.
//
// Growth is best-first: the pending leaf whose best split removes the most
// squared error is expanded first, until the total node budget (internal
// nodes plus leaves) is spent or no legal split remains. A budget of 6 thus
// allows two splits and three leaves.
//
// Split search is exhaustive over midpoints between consecutive distinct
// finite values. Rows missing the candidate feature are tried on both sides
// and follow whichever side gives the larger improvement; that side becomes
// the node's default direction at prediction time. Sums are taken over
// sorted values so the fitted tree does not depend on row order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "brt/dataset.hpp"
#include "brt/error.hpp"

namespace brt {

enum class Direction : std::uint8_t { left, right };

struct TreeParams {
  std::size_t max_nodes = 6;
  std::size_t min_leaf_obs = 3;

  void validate() const {
    if (max_nodes < 3) throw InvalidArgument("max_nodes must be at least 3");
    if (min_leaf_obs < 1) throw InvalidArgument("min_leaf_obs must be at least 1");
  }
};

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double improvement = 0.0;  // SSE(parent) - SSE(left) - SSE(right)
  Direction default_direction = Direction::left;
};

struct TreeNode {
  std::int32_t left = -1;  // child indices; -1 on leaves
  std::int32_t right = -1;
  SplitCandidate split;  // meaningful on internal nodes only
  double value = 0.0;    // mean target of the learn rows reaching the node
  std::size_t n_obs = 0;

  bool is_leaf() const { return left < 0; }
};

class RegressionTree {
 public:
  RegressionTree() : RegressionTree(0, 0.0) {}

  // Single-leaf stump.
  RegressionTree(std::size_t n_features, double value) : n_features_(n_features) {
    TreeNode leaf;
    leaf.value = value;
    nodes_.push_back(leaf);
  }

  // Adopts a flattened node array. Children must come after their parent and
  // every non-root node must have exactly one parent.
  RegressionTree(std::size_t n_features, std::vector<TreeNode> nodes)
      : n_features_(n_features), nodes_(std::move(nodes)) {
    validate_structure();
  }

  double predict(std::span<const double> sample) const {
    if (sample.size() != n_features_) throw InvalidArgument("feature count mismatch");
    return predict_unchecked(sample.data());
  }

  // Caller guarantees `sample` has n_features() entries.
  double predict_unchecked(const double* sample) const {
    const TreeNode* node = nodes_.data();
    while (node->left >= 0) {
      const double v = sample[node->split.feature];
      const bool go_left = std::isnan(v) ? node->split.default_direction == Direction::left
                                         : v <= node->split.threshold;
      node = nodes_.data() + (go_left ? node->left : node->right);
    }
    return node->value;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t n_features() const { return n_features_; }

  std::size_t split_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return !n.is_leaf(); }));
  }
  std::size_t leaf_count() const { return nodes_.size() - split_count(); }

 private:
  void validate_structure() const {
    if (nodes_.empty()) throw InvalidArgument("tree has no nodes");
    std::vector<int> parents(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const TreeNode& n = nodes_[i];
      if (n.is_leaf()) {
        if (n.right >= 0) throw InvalidArgument("leaf node has a right child");
        continue;
      }
      const auto size = static_cast<std::int32_t>(nodes_.size());
      const auto self = static_cast<std::int32_t>(i);
      if (n.left <= self || n.right <= self || n.left >= size || n.right >= size ||
          n.left == n.right) {
        throw InvalidArgument("tree child index out of order");
      }
      if (n.split.feature >= n_features_) throw InvalidArgument("split feature out of range");
      ++parents[static_cast<std::size_t>(n.left)];
      ++parents[static_cast<std::size_t>(n.right)];
    }
    for (std::size_t i = 1; i < parents.size(); ++i) {
      if (parents[i] != 1) throw InvalidArgument("tree node is unreachable or shared");
    }
  }

  std::size_t n_features_ = 0;
  std::vector<TreeNode> nodes_;
};

// Sum of split improvements per feature; zero for features never split on.
inline std::vector<double> split_improvements(const RegressionTree& tree) {
  std::vector<double> totals(tree.n_features(), 0.0);
  for (const TreeNode& n : tree.nodes()) {
    if (!n.is_leaf()) totals[n.split.feature] += n.split.improvement;
  }
  return totals;
}

namespace detail {

struct NodeStats {
  double sum = 0.0;
  double mean = 0.0;
  double sse = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Sorts `values` in place so the accumulation order is canonical.
inline NodeStats node_stats(std::vector<double>& values) {
  NodeStats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  for (double v : values) s.sum += v;
  s.mean = s.sum / static_cast<double>(values.size());
  for (double v : values) s.sse += (v - s.mean) * (v - s.mean);
  s.min = values.front();
  s.max = values.back();
  return s;
}

// Midpoint that stays strictly between a and b whenever they are not adjacent
// doubles; falls back to `a` (still routes a left and b right).
inline double split_point(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return (a < mid && mid < b) ? mid : a;
}

}  // namespace detail

// Reusable tree grower. Holds scratch buffers so repeated fits (one per
// boosting stage) do not reallocate.
class TreeFitter {
 public:
  explicit TreeFitter(TreeParams params) : params_(params) { params_.validate(); }

  const TreeParams& params() const { return params_; }

  // Fits on every row of `x`; `targets` has one entry per row.
  RegressionTree fit(const FeatureMatrix& x, std::span<const double> targets) {
    std::vector<std::size_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return fit(x, targets, rows);
  }

  // Fits on the listed rows only. `targets` is indexed by row of `x`.
  RegressionTree fit(const FeatureMatrix& x, std::span<const double> targets,
                     std::span<const std::size_t> rows) {
    if (rows.empty() || x.rows() == 0) throw InvalidArgument("empty learn sample");
    if (targets.size() != x.rows()) {
      throw InvalidArgument("targets length does not match sample count");
    }
    x_ = &x;
    y_ = targets;

    std::vector<TreeNode> nodes;
    std::vector<Pending> pending;

    Pending root;
    root.rows.assign(rows.begin(), rows.end());
    root.stats = stats_of(root.rows);
    nodes.push_back(make_node(root));
    root.node = 0;
    plan_split(root);
    pending.push_back(std::move(root));

    while (nodes.size() + 2 <= params_.max_nodes) {
      // Highest improvement first; ties go to the earliest-created leaf.
      std::size_t pick = pending.size();
      for (std::size_t i = 0; i < pending.size(); ++i) {
        if (!pending[i].plan) continue;
        if (pick == pending.size() ||
            pending[i].plan->split.improvement > pending[pick].plan->split.improvement) {
          pick = i;
        }
      }
      if (pick == pending.size()) break;

      Pending parent = std::move(pending[pick]);
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));
      SplitPlan& plan = *parent.plan;

      TreeNode& pn = nodes[parent.node];
      pn.split = plan.split;
      pn.left = static_cast<std::int32_t>(nodes.size());
      pn.right = static_cast<std::int32_t>(nodes.size() + 1);

      Pending left{std::move(plan.left_rows), plan.left_stats, nodes.size(), std::nullopt};
      Pending right{std::move(plan.right_rows), plan.right_stats, nodes.size() + 1, std::nullopt};
      nodes.push_back(make_node(left));
      nodes.push_back(make_node(right));
      plan_split(left);
      plan_split(right);
      pending.push_back(std::move(left));
      pending.push_back(std::move(right));
    }

    return RegressionTree(x.cols(), std::move(nodes));
  }

 private:
  struct SplitPlan {
    SplitCandidate split;
    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    detail::NodeStats left_stats;
    detail::NodeStats right_stats;
  };

  struct Pending {
    std::vector<std::size_t> rows;
    detail::NodeStats stats;
    std::size_t node = 0;
    std::optional<SplitPlan> plan;
  };

  struct Point {
    double x;
    double y;
  };

  static TreeNode make_node(const Pending& p) {
    TreeNode n;
    n.value = p.stats.mean;
    n.n_obs = p.rows.size();
    return n;
  }

  detail::NodeStats stats_of(const std::vector<std::size_t>& rows) {
    values_.clear();
    for (std::size_t r : rows) values_.push_back(y_[r]);
    return detail::node_stats(values_);
  }

  // Finds the best legal split of `p` and materializes its children.
  void plan_split(Pending& p) {
    const std::size_t n = p.rows.size();
    if (n < 2 * params_.min_leaf_obs) return;
    if (!(p.stats.min < p.stats.max)) return;  // constant targets

    const double tol = 1e-10 * p.stats.sse;
    const double parent_term = p.stats.sum * p.stats.sum / static_cast<double>(n);
    const auto min_leaf = params_.min_leaf_obs;

    std::optional<SplitCandidate> best;
    double best_gain = -std::numeric_limits<double>::infinity();

    for (std::size_t f = 0; f < x_->cols(); ++f) {
      finite_.clear();
      missing_.clear();
      for (std::size_t r : p.rows) {
        const double v = (*x_)(r, f);
        if (std::isnan(v)) {
          missing_.push_back(y_[r]);
        } else {
          finite_.push_back({v, y_[r]});
        }
      }
      if (finite_.size() < 2) continue;
      std::sort(finite_.begin(), finite_.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
      });
      if (finite_.front().x == finite_.back().x) continue;  // degenerate feature

      std::sort(missing_.begin(), missing_.end());
      double sum_missing = 0.0;
      for (double v : missing_) sum_missing += v;
      const std::size_t n_missing = missing_.size();
      const std::size_t n_finite = finite_.size();

      suffix_.assign(n_finite + 1, 0.0);
      for (std::size_t k = n_finite; k-- > 0;) suffix_[k] = suffix_[k + 1] + finite_[k].y;

      double prefix = 0.0;
      for (std::size_t k = 0; k + 1 < n_finite; ++k) {
        prefix += finite_[k].y;
        if (finite_[k].x == finite_[k + 1].x) continue;
        const std::size_t nl_finite = k + 1;
        const std::size_t nr_finite = n_finite - nl_finite;
        const double sr_finite = suffix_[k + 1];

        auto gain_for = [&](Direction missing_side) -> std::optional<double> {
          const bool ml = missing_side == Direction::left;
          const std::size_t nl = nl_finite + (ml ? n_missing : 0);
          const std::size_t nr = nr_finite + (ml ? 0 : n_missing);
          if (nl < min_leaf || nr < min_leaf) return std::nullopt;
          const double sl = prefix + (ml ? sum_missing : 0.0);
          const double sr = sr_finite + (ml ? 0.0 : sum_missing);
          return sl * sl / static_cast<double>(nl) + sr * sr / static_cast<double>(nr) -
                 parent_term;
        };

        // Without missing rows the direction does not change the gain; the
        // larger child becomes the default.
        const Direction larger = nl_finite >= nr_finite ? Direction::left : Direction::right;
        const Direction smaller = larger == Direction::left ? Direction::right : Direction::left;
        std::optional<double> gain;
        Direction dir = larger;
        if (n_missing == 0) {
          gain = gain_for(larger);
        } else {
          const auto g_larger = gain_for(larger);
          const auto g_smaller = gain_for(smaller);
          gain = g_larger;
          if (g_smaller && (!g_larger || *g_smaller > *g_larger)) {
            gain = g_smaller;
            dir = smaller;
          }
        }
        if (!gain) continue;
        if (!best || *gain > best_gain + tol) {
          best_gain = *gain;
          best = SplitCandidate{f, detail::split_point(finite_[k].x, finite_[k + 1].x), *gain, dir};
        }
      }
    }

    if (!best || !(best_gain > tol)) return;

    SplitPlan plan;
    plan.split = *best;
    for (std::size_t r : p.rows) {
      const double v = (*x_)(r, best->feature);
      const bool go_left = std::isnan(v) ? best->default_direction == Direction::left
                                         : v <= best->threshold;
      (go_left ? plan.left_rows : plan.right_rows).push_back(r);
    }
    plan.left_stats = stats_of(plan.left_rows);
    plan.right_stats = stats_of(plan.right_rows);
    plan.split.improvement =
        std::max(0.0, p.stats.sse - plan.left_stats.sse - plan.right_stats.sse);
    p.plan = std::move(plan);
  }

  TreeParams params_;
  const FeatureMatrix* x_ = nullptr;
  std::span<const double> y_;
  std::vector<Point> finite_;
  std::vector<double> missing_;
  std::vector<double> suffix_;
  std::vector<double> values_;
};

inline RegressionTree fit_tree(const FeatureMatrix& x, std::span<const double> targets,
                               const TreeParams& params) {
  TreeFitter fitter(params);
  return fitter.fit(x, targets);
}

inline double predict_tree(const RegressionTree& tree, std::span<const double> sample) {
  return tree.predict(sample);
}

}  // namespace brt
