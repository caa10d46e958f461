#include <gtest/gtest.h>

#include <functional>

#include "roadsel/error.hpp"
#include "roadsel/ml/models.hpp"
#include "synthetic.hpp"

namespace roadsel::ml {
namespace {

Hyperparams quick() {
  Hyperparams hp;
  hp.forest_trees = 20;
  hp.boosting_rounds = 30;
  return hp;
}

void expect_kind(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "no exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

TEST(NaiveBayes, SymmetricClassesScoreHalfAtMidpoint) {
  Dataset d;
  d.x.resize(4, 1);
  d.x << -1.5, -0.5, 0.5, 1.5;
  d.y.resize(4);
  d.y << 0, 0, 1, 1;
  const TrainedModel m = train(Family::naive_bayes, d, {}, 0);
  EXPECT_NEAR(score(m, Eigen::VectorXd::Zero(1)), 0.5, 1e-12);
  EXPECT_GT(score(m, Eigen::VectorXd::Constant(1, 1.0)), 0.5);
  EXPECT_LT(score(m, Eigen::VectorXd::Constant(1, -1.0)), 0.5);
}

TEST(LinearModels, SeparateMarginData) {
  const Dataset d = testing::separable_dataset(200, 1.0, 3);
  for (Family f : {Family::logistic_regression, Family::svm}) {
    const TrainedModel m = train(f, d, {}, 0);
    EXPECT_GE(testing::accuracy(predict_all(m, d.x), d.y), 0.99) << to_string(f);
  }
}

TEST(TreeModels, LearnThreshold) {
  const Dataset d = testing::threshold_dataset(300, 4, 2, 0.4, 8);
  for (Family f : {Family::decision_tree, Family::random_forest, Family::gradient_boosting}) {
    const TrainedModel m = train(f, d, quick(), 1);
    EXPECT_GE(testing::accuracy(predict_all(m, d.x), d.y), 0.98) << to_string(f);
  }
}

TEST(RandomForest, SingleFullTreeEqualsDecisionTree) {
  const Dataset d = testing::band_dataset(200, 3, 0.3, 0.6, 5);
  Hyperparams hp;
  hp.forest_trees = 1;
  hp.bootstrap = false;
  hp.max_features = 0;
  const TrainedModel forest = train(Family::random_forest, d, hp, 11);
  const TrainedModel tree = train(Family::decision_tree, d, hp, 12);
  const Dataset probe = testing::threshold_dataset(100, 3, 0, 0.5, 77);
  EXPECT_EQ(score_all(forest, probe.x), score_all(tree, probe.x));
}

TEST(Standardization, AffineRescaleLeavesPredictionsUnchanged) {
  const Dataset d = testing::threshold_dataset(150, 3, 1, 0.5, 21);
  Eigen::VectorXi noisy = d.y;
  for (Eigen::Index i = 0; i < noisy.size(); i += 9) noisy[i] = 1 - noisy[i];
  Dataset base = d;
  base.y = noisy;
  Dataset shifted = base;
  const Eigen::RowVector3d a(1000.0, 0.01, 7.0);
  const Eigen::RowVector3d b(-50.0, 3.0, 1e4);
  shifted.x = (base.x.array().rowwise() * a.array()).rowwise() + b.array();
  for (Family f : {Family::naive_bayes, Family::logistic_regression, Family::svm}) {
    const Eigen::VectorXd s0 = score_all(train(f, base, {}, 0), base.x);
    const Eigen::VectorXd s1 = score_all(train(f, shifted, {}, 0), shifted.x);
    EXPECT_LT((s0 - s1).cwiseAbs().maxCoeff(), 1e-6) << to_string(f);
  }
}

TEST(AllFamilies, DeterministicAndBounded) {
  const Dataset d = testing::band_dataset(120, 4, 0.2, 0.5, 6);
  const Dataset probe = testing::threshold_dataset(50, 4, 0, 0.5, 60);
  for (Family f : kAllFamilies) {
    const Eigen::VectorXd s0 = score_all(train(f, d, quick(), 9), probe.x);
    const Eigen::VectorXd s1 = score_all(train(f, d, quick(), 9), probe.x);
    EXPECT_EQ(s0, s1) << to_string(f);
    EXPECT_GE(s0.minCoeff(), 0.0) << to_string(f);
    EXPECT_LE(s0.maxCoeff(), 1.0) << to_string(f);
  }
}

TEST(AllFamilies, RejectBadTrainingData) {
  Dataset one_class = testing::threshold_dataset(20, 2, 0, 2.0, 1);
  Dataset nan = testing::threshold_dataset(20, 2, 0, 0.5, 1);
  nan.x(3, 1) = std::numeric_limits<double>::quiet_NaN();
  for (Family f : kAllFamilies) {
    expect_kind(ErrorKind::degenerate_training, [&] { train(f, one_class, quick(), 0); });
    expect_kind(ErrorKind::invalid_data, [&] { train(f, nan, quick(), 0); });
  }
}

TEST(Scoring, ArityMismatchIsInvalidData) {
  const TrainedModel m = train(Family::naive_bayes, testing::threshold_dataset(30, 3, 0, 0.5, 2), {}, 0);
  expect_kind(ErrorKind::invalid_data, [&] { score(m, Eigen::VectorXd::Zero(2)); });
  expect_kind(ErrorKind::invalid_data, [&] { score_all(m, Eigen::MatrixXd::Zero(4, 5)); });
}

TEST(GiniImportance, InformativeFeatureDominates) {
  const Dataset d = testing::threshold_dataset(500, 6, 3, 0.5, 13);
  for (Family f : {Family::decision_tree, Family::random_forest, Family::gradient_boosting}) {
    Hyperparams hp = quick();
    hp.max_features = 0;
    const ImportanceReport r = gini_importance(train(f, d, hp, 2));
    EXPECT_GE(r.importance[3], 0.9) << to_string(f);
    EXPECT_NEAR(r.importance.sum(), 1.0, 1e-9) << to_string(f);
    EXPECT_GE(r.importance.minCoeff(), 0.0) << to_string(f);
  }
}

TEST(GiniImportance, StumpGivesAllCreditToOneFeature) {
  Dataset d;
  d.x.resize(4, 2);
  d.x << 0, 1, 1, 0, 2, 1, 3, 0;
  d.y.resize(4);
  d.y << 0, 0, 1, 1;
  const ImportanceReport r = gini_importance(train(Family::decision_tree, d, {}, 0));
  EXPECT_EQ(r.importance[0], 1.0);
  EXPECT_EQ(r.importance[1], 0.0);
}

TEST(GiniImportance, NonTreeFamiliesUnsupported) {
  const Dataset d = testing::threshold_dataset(40, 2, 0, 0.5, 3);
  for (Family f : {Family::naive_bayes, Family::logistic_regression, Family::svm}) {
    const TrainedModel m = train(f, d, {}, 0);
    expect_kind(ErrorKind::unsupported_model, [&] { gini_importance(m); });
  }
}

TEST(LogisticGradient, MatchesCentralDifference) {
  const Dataset d = testing::threshold_dataset(200, 5, 1, 0.5, 31);
  Eigen::VectorXi noisy = d.y;
  for (Eigen::Index i = 0; i < noisy.size(); i += 5) noisy[i] = 1 - noisy[i];
  const Eigen::MatrixXd xs = Scaler::fit(d.x).apply(d.x);
  const Hyperparams hp;
  EXPECT_LT(testing::logistic_gradient_error(xs, noisy, fit_logistic(xs, noisy, hp), hp.l2), 1e-4);
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd theta(6);
    for (Eigen::Index j = 0; j < 6; ++j) theta[j] = rng.uniform(-2.0, 2.0);
    EXPECT_LT(testing::logistic_gradient_error(xs, noisy, theta, hp.l2), 1e-4);
  }
}

TEST(LogisticRegression, ConvergesToStationaryPoint) {
  const Dataset d = testing::threshold_dataset(200, 3, 0, 0.5, 32);
  Eigen::VectorXi noisy = d.y;
  for (Eigen::Index i = 0; i < noisy.size(); i += 4) noisy[i] = 1 - noisy[i];
  const Eigen::MatrixXd xs = Scaler::fit(d.x).apply(d.x);
  const Hyperparams hp;
  int iterations = 0;
  const Eigen::VectorXd theta = fit_logistic(xs, noisy, hp, &iterations);
  EXPECT_LT(iterations, hp.lr_max_iterations);
  EXPECT_LT(logistic_gradient<double>(xs, noisy, theta, hp.l2).norm(), hp.lr_tolerance * 10);
}

}  // namespace
}  // namespace roadsel::ml
