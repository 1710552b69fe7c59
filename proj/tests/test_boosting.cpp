#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "brt/boosting.hpp"
#include "brt/interpret.hpp"
#include "brt/sampling.hpp"
#include "oracle.hpp"

using namespace brt;

namespace {

Dataset identity_toy(std::size_t n) {
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({static_cast<double>(i)});
    y.push_back(static_cast<double>(i));
  }
  return make_dataset(rows, y);
}

BoostConfig small(std::size_t trees, double rate, std::size_t nodes) {
  BoostConfig c;
  c.n_trees = trees;
  c.learn_rate = rate;
  c.max_nodes = nodes;
  c.min_leaf_obs = 1;
  c.subsample_fraction = 1.0;
  return c;
}

}  // namespace

TEST(LineSearch, ClosedForm) {
  const std::vector<double> r = {1, 2, 3};
  const std::vector<double> h = {1, 1, 1};
  const LineSearchResult g = line_search_gamma(r, h);
  EXPECT_DOUBLE_EQ(g.gamma, 2.0);
  EXPECT_FALSE(g.degenerate);
  const LineSearchResult z = line_search_gamma(r, std::vector<double>{0, 0, 0});
  EXPECT_EQ(z.gamma, 1.0);
  EXPECT_TRUE(z.degenerate);
  EXPECT_THROW(line_search_gamma(r, std::vector<double>{1}), InvalidArgument);
}

TEST(Sampling, SubsampleSize) {
  EXPECT_EQ(subsample_size(25, 0.95), 23u);
  EXPECT_EQ(subsample_size(10, 1.0), 10u);
  EXPECT_EQ(subsample_size(10, 0.01), 2u);
  EXPECT_EQ(subsample_size(100, 0.5), 50u);
}

TEST(Sampling, DrawIsSortedDistinctAndSeeded) {
  std::vector<std::size_t> pop(25);
  for (std::size_t i = 0; i < pop.size(); ++i) pop[i] = i * 2;
  RandomStream a(7);
  RandomStream b(7);
  const auto s1 = draw_without_replacement(pop, 23, a);
  const auto s2 = draw_without_replacement(pop, 23, b);
  EXPECT_EQ(s1, s2);
  ASSERT_EQ(s1.size(), 23u);
  EXPECT_TRUE(std::is_sorted(s1.begin(), s1.end()));
  EXPECT_EQ(std::adjacent_find(s1.begin(), s1.end()), s1.end());
  for (std::size_t v : s1) EXPECT_EQ(v % 2, 0u);
}

TEST(Sampling, BelowStaysInRange) {
  RandomStream r(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = r.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Boosting, PredictAddsShrunkStages) {
  // Stump with leaves 0 / 10 at x <= 2.5, gamma 2, rate 0.1, f0 1:
  // f(3) = 1 + 0.1 * 2 * 10 = 3.
  std::vector<TreeNode> nodes(3);
  nodes[0].left = 1;
  nodes[0].right = 2;
  nodes[0].split = {0, 2.5, 100.0, Direction::left};
  nodes[1].value = 0.0;
  nodes[2].value = 10.0;
  BoostConfig c;
  c.learn_rate = 0.1;
  c.n_trees = 1;
  const BoostedModel m(1.0, {{RegressionTree(1, nodes), 2.0}}, c, {"x1"});
  const double x[] = {3.0};
  EXPECT_DOUBLE_EQ(m.predict(x), 3.0);
  EXPECT_DOUBLE_EQ(m.predict(x, 0), 1.0);
  EXPECT_THROW(m.predict(x, 2), InvalidArgument);
}

TEST(Boosting, ZeroTreesPredictsTheMean) {
  const Dataset d = make_dataset({{1}, {2}, {3}, {4}}, {1, 2, 3, 10});
  const BoostedModel m = fit_ensemble(d, small(0, 0.1, 3));
  EXPECT_TRUE(m.stages().empty());
  for (double v : m.predict_batch(d.features)) EXPECT_DOUBLE_EQ(v, 4.0);
}

TEST(Boosting, FitsIdentity) {
  const Dataset d = identity_toy(20);
  BoostConfig c = small(2000, 0.1, 3);
  const BoostedModel m = fit_ensemble(d, c);
  const StagedCurve curve = staged_metric(m, d, StagedMetricKind::mse, 1);
  ASSERT_EQ(curve.points.size(), 2000u);
  EXPECT_LT(curve.points.back().value, 0.05);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    EXPECT_LE(curve.points[i].value, curve.points[i - 1].value * (1 + 1e-12));
  }
}

TEST(Boosting, MatchesPlainOracle) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset d = oracle::random_dataset(gen, 6 + gen() % 7, 2);
    const std::size_t trees = 1 + gen() % 5;
    const double rate = 0.05 + 0.9 * std::uniform_real_distribution<double>()(gen);
    const BoostedModel m = fit_ensemble(d, small(trees, rate, 3));
    const oracle::Ensemble o = oracle::boost(d, trees, rate, 3, 1);
    ASSERT_EQ(m.stages().size(), o.trees.size());
    for (std::size_t i = 0; i < d.rows(); ++i) {
      EXPECT_NEAR(m.predict(d.features.row(i)), o.predict(d.features.row(i)), 1e-12);
    }
  }
}

TEST(Boosting, BatchAndSingleAgreeBitwise) {
  std::mt19937_64 gen(2);
  const Dataset d = oracle::random_dataset(gen, 30, 3);
  BoostConfig c = small(300, 0.05, 6);
  c.subsample_fraction = 0.8;
  const BoostedModel m = fit_ensemble(d, c);
  const auto batch = m.predict_batch(d.features);
  for (std::size_t i = 0; i < d.rows(); ++i) EXPECT_EQ(batch[i], m.predict(d.features.row(i)));
  const auto partial = m.predict_batch(d.features, 100);
  for (std::size_t i = 0; i < d.rows(); ++i) EXPECT_EQ(partial[i], m.predict(d.features.row(i), 100));
}

TEST(Boosting, SameSeedSameModel) {
  std::mt19937_64 gen(9);
  const Dataset d = oracle::random_dataset(gen, 25, 4);
  BoostConfig c = small(200, 0.1, 6);
  c.subsample_fraction = 0.7;
  c.seed = 42;
  const BoostedModel a = fit_ensemble(d, c);
  const BoostedModel b = fit_ensemble(d, c);
  EXPECT_EQ(a.predict_batch(d.features), b.predict_batch(d.features));
  c.seed = 43;
  const BoostedModel other = fit_ensemble(d, c);
  EXPECT_NE(a.predict_batch(d.features), other.predict_batch(d.features));
}

TEST(Boosting, MissingResponsesAreIgnored) {
  const Dataset d = make_dataset({{1}, {2}, {3}, {4}, {5}}, {1, 2, kMissing, 4, 5});
  const BoostedModel m = fit_ensemble(d, small(0, 0.1, 3));
  EXPECT_DOUBLE_EQ(m.f0(), 3.0);
}

TEST(Boosting, Errors) {
  BoostConfig bad = small(10, 0.1, 3);
  bad.learn_rate = 1.5;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = small(10, 0.1, 3);
  bad.subsample_fraction = 0.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = small(10, 0.1, 2);
  EXPECT_THROW(bad.validate(), InvalidArgument);

  const Dataset empty = make_dataset({}, {});
  EXPECT_THROW(fit_ensemble(empty, small(1, 0.1, 3)), InvalidArgument);
  const Dataset no_y = make_dataset({{1}, {2}}, {kMissing, kMissing});
  try {
    fit_ensemble(no_y, small(1, 0.1, 3));
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "no usable response values");
  }
}

TEST(Staged, StrideAlwaysEndsAtTheFinalStage) {
  const Dataset d = identity_toy(10);
  const BoostedModel m = fit_ensemble(d, small(25, 0.1, 3));
  const StagedCurve c = staged_metric(m, d, StagedMetricKind::mse, 10);
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_EQ(c.points[0].n_trees, 10u);
  EXPECT_EQ(c.points[1].n_trees, 20u);
  EXPECT_EQ(c.points[2].n_trees, 25u);
  // The curve uses the same arithmetic as prediction.
  const auto pred = m.predict_batch(d.features, 20);
  double sse = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) sse += (d.response[i] - pred[i]) * (d.response[i] - pred[i]);
  EXPECT_EQ(c.points[1].value, sse / 10.0);
  EXPECT_EQ(default_stage_stride(50000), 100u);
  EXPECT_EQ(default_stage_stride(100), 1u);
  EXPECT_THROW(staged_metric(m, d, StagedMetricKind::mse, 0), InvalidArgument);
}

// Property: with no shrinkage every prediction is the initial constant.
TEST(BoostingProperty, ZeroLearnRateKeepsF0) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset d = oracle::random_dataset(gen, 15, 2);
    BoostConfig c = small(50, 0.0, 6);
    c.subsample_fraction = 0.8;
    const BoostedModel m = fit_ensemble(d, c);
    for (double v : m.predict_batch(d.features)) EXPECT_EQ(v, m.f0());
  }
}

TEST(BoostingProperty, TrainingMseNeverIncreasesWithFullSample) {
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset d = oracle::random_dataset(gen, 25, 3);
    BoostConfig c = small(400, 0.05 + 0.1 * trial, 3 + trial % 4);
    const BoostedModel m = fit_ensemble(d, c);
    const StagedCurve curve = staged_metric(m, d, StagedMetricKind::mse, 1);
    double prev = oracle::sse(d.response) / static_cast<double>(d.rows());
    for (const StagedPoint& p : curve.points) {
      EXPECT_LE(p.value, prev + 1e-12 * prev);
      prev = p.value;
    }
  }
}

// Property: an unrelated noise column gets little of the influence.
TEST(BoostingProperty, NoiseFeatureHasLowInfluence) {
  std::mt19937_64 gen(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> eps(0.0, 0.05);
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (int i = 0; i < 200; ++i) {
    const double a = u(gen);
    const double b = u(gen);
    rows.push_back({a, b, u(gen)});
    y.push_back(3.0 * a + 2.0 * b + eps(gen));
  }
  const Dataset d = make_dataset(rows, y);
  BoostConfig c = small(1000, 0.05, 6);
  c.min_leaf_obs = 5;
  c.subsample_fraction = 0.5;
  const InfluenceReport r = relative_influence(fit_ensemble(d, c));
  EXPECT_LT(r.percent[2], 5.0);
}
