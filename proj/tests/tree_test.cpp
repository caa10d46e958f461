#include <gtest/gtest.h>

#include <numeric>

#include "roadsel/ml/tree.hpp"
#include "synthetic.hpp"

namespace roadsel::ml {
namespace {

TEST(Gini, Values) {
  EXPECT_EQ(gini(0.0, 0.0), 0.0);
  EXPECT_EQ(gini(5.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(gini(1.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(gini(1.0, 3.0), 0.375);
}

TEST(SplitThreshold, MidpointNeverReachesUpperValue) {
  EXPECT_EQ(split_threshold(1.0, 2.0), 1.5);
  const double lo = 1.0;
  const double hi = std::nextafter(1.0, 2.0);
  const double t = split_threshold(lo, hi);
  EXPECT_LT(t, hi);
  EXPECT_GE(t, lo);
}

TEST(BestSplit, MatchesBruteForce) {
  // Small integer grids force many exact impurity ties.
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(rng.integer(2, 50));
    const int grid = seed % 2 == 0 ? 4 : 1000;
    Eigen::MatrixXd x(n, 4);
    Eigen::VectorXi y(n);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int j = 0; j < 4; ++j) x(i, j) = static_cast<double>(rng.integer(0, grid));
      y[i] = static_cast<int>(rng.integer(0, 1));
      w[static_cast<std::size_t>(i)] = seed % 3 == 0 ? static_cast<double>(rng.integer(1, 3)) : 1.0;
    }
    std::vector<std::size_t> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const std::vector<int> features = {0, 1, 2, 3};
    const SplitChoice got = best_gini_split(x, y, w, rows, features);
    const testing::BruteSplit want = testing::brute_force_split(x, y, w, rows);
    ASSERT_EQ(got.valid, want.valid) << seed;
    if (!want.valid) continue;
    EXPECT_EQ(got.feature, want.feature) << seed;
    EXPECT_EQ(got.threshold, want.threshold) << seed;
    EXPECT_NEAR(got.impurity, want.impurity, 1e-12) << seed;
  }
}

TEST(BestSplit, NoSplitOnConstantFeatures) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(6, 2);
  Eigen::VectorXi y(6);
  y << 0, 1, 0, 1, 0, 1;
  const std::vector<double> w(6, 1.0);
  const std::vector<std::size_t> rows = {0, 1, 2, 3, 4, 5};
  const std::vector<int> features = {0, 1};
  EXPECT_FALSE(best_gini_split(x, y, w, rows, features).valid);
}

TEST(ClassificationTree, UnlimitedDepthReachesPurity) {
  const ml::Dataset d = testing::threshold_dataset(300, 5, 0, 0.5, 4);
  Eigen::VectorXi noisy = d.y;
  Rng rng(1);
  for (Eigen::Index i = 0; i < noisy.size(); ++i) {
    if (rng.uniform() < 0.2) noisy[i] = 1 - noisy[i];
  }
  TreeParams params;
  params.max_depth = 0;
  const std::vector<double> w(300, 1.0);
  const Tree tree = grow_classification_tree(d.x, noisy, w, params, nullptr);
  for (Eigen::Index i = 0; i < d.x.rows(); ++i) {
    EXPECT_EQ(tree.predict(d.x.row(i).transpose()), static_cast<double>(noisy[i]));
  }
}

TEST(ClassificationTree, DepthCapHolds) {
  const ml::Dataset d = testing::band_dataset(400, 3, 0.2, 0.3, 9);
  Eigen::VectorXi noisy = d.y;
  for (Eigen::Index i = 0; i < noisy.size(); i += 7) noisy[i] = 1 - noisy[i];
  for (int cap : {1, 2, 3, 6}) {
    TreeParams params;
    params.max_depth = cap;
    const std::vector<double> w(400, 1.0);
    EXPECT_LE(grow_classification_tree(d.x, noisy, w, params, nullptr).depth(), cap);
  }
}

TEST(ClassificationTree, ZeroWeightRowsAreIgnored) {
  Eigen::MatrixXd x(4, 1);
  x << 0, 1, 2, 3;
  Eigen::VectorXi y(4);
  y << 0, 1, 0, 1;
  const std::vector<double> w = {1.0, 0.0, 1.0, 0.0};
  const Tree tree = grow_classification_tree(x, y, w, {}, nullptr);
  ASSERT_EQ(tree.nodes.size(), 1u);
  EXPECT_EQ(tree.nodes[0].value, 0.0);
  EXPECT_EQ(tree.nodes[0].weight, 2.0);
}

TEST(RegressionTree, FitsStepFunction) {
  Eigen::MatrixXd x(8, 1);
  Eigen::VectorXd t(8);
  for (int i = 0; i < 8; ++i) {
    x(i, 0) = i;
    t[i] = i < 3 ? -1.0 : 2.0;
  }
  TreeParams params;
  params.max_depth = 1;
  const Tree tree = grow_regression_tree(x, t, params);
  ASSERT_EQ(tree.nodes.size(), 3u);
  EXPECT_EQ(tree.nodes[0].feature, 0);
  EXPECT_EQ(tree.nodes[0].threshold, 2.5);
  EXPECT_DOUBLE_EQ(tree.predict(Eigen::VectorXd::Constant(1, 0.0)), -1.0);
  EXPECT_DOUBLE_EQ(tree.predict(Eigen::VectorXd::Constant(1, 7.0)), 2.0);
}

TEST(ImpurityDecrease, StumpCreditsOneFeature) {
  Eigen::MatrixXd x(4, 2);
  x << 0, 5, 1, 5, 2, 5, 3, 5;
  Eigen::VectorXi y(4);
  y << 0, 0, 1, 1;
  const std::vector<double> w(4, 1.0);
  const Tree tree = grow_classification_tree(x, y, w, {}, nullptr);
  const Eigen::VectorXd credit = impurity_decrease(tree, 2);
  EXPECT_DOUBLE_EQ(credit[0], 0.5);
  EXPECT_EQ(credit[1], 0.0);
}

}  // namespace
}  // namespace roadsel::ml
