#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "roadsel/ml/dataset.hpp"
#include "roadsel/ml/tree.hpp"

namespace roadsel::ml {

/// Training knobs for all six families. Defaults are the project defaults.
struct Hyperparams {
  int max_depth = 10;          ///< decision tree and forest trees; <= 0 unlimited
  int forest_trees = 100;
  bool bootstrap = true;
  int max_features = -1;       ///< per-split features for forests; -1 = ceil(sqrt(d)), 0 = all
  int boosting_rounds = 100;
  int boosting_depth = 3;
  double shrinkage = 0.1;
  double l2 = 1e-3;            ///< logistic regression and SVM
  int lr_max_iterations = 10000;
  double lr_tolerance = 1e-6;  ///< stop when the gradient norm falls below this
  int svm_iterations = 3000;
  double variance_floor = 1e-9;
};

/// Per-feature standardization. Constant features keep scale 1.
struct Scaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Scaler fit(const Eigen::MatrixXd& x);
  static Scaler identity(std::size_t features);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& row) const;
};

struct NaiveBayesParams {
  Eigen::Vector2d log_prior;
  Eigen::MatrixXd mean;      ///< 2 x d, row = class
  Eigen::MatrixXd variance;  ///< 2 x d
};

/// Linear decision function w.x + b (logistic regression and SVM).
struct LinearParams {
  Eigen::VectorXd weights;
  double bias = 0.0;
};

/// A decision tree is a forest of one.
struct ForestParams {
  std::vector<Tree> trees;
};

struct BoostingParams {
  double initial = 0.0;  ///< log-odds of the training prevalence
  double shrinkage = 0.1;
  std::vector<Tree> trees;
};

using ModelParams = std::variant<NaiveBayesParams, LinearParams, ForestParams, BoostingParams>;

struct TrainedModel {
  Family family = Family::decision_tree;
  std::vector<std::string> feature_names;
  Scaler scaler;
  ModelParams params;

  std::size_t features() const { return static_cast<std::size_t>(scaler.mean.size()); }
};

/// Fits one family. Throws Error(degenerate_training) for a single-class
/// dataset and Error(invalid_data) for non-finite features.
TrainedModel train(Family family, const Dataset& data, const Hyperparams& hp, std::uint64_t seed);

/// P(unsafe | row) in [0, 1]. Throws Error(invalid_data) on arity mismatch.
double score(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& row);
/// Row-wise score / predict over a sample matrix.
Eigen::VectorXd score_all(const TrainedModel& model, const Eigen::MatrixXd& x);

/// 1 (unsafe) when score >= 0.5.
int predict(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& row);
Eigen::VectorXi predict_all(const TrainedModel& model, const Eigen::MatrixXd& x);

/// Mean decrease in impurity per feature, normalized to sum 1 (all zero if
/// the model never splits). Throws Error(unsupported_model) for non-tree
/// families.
struct ImportanceReport {
  std::vector<std::string> feature_names;
  Eigen::VectorXd importance;
};

ImportanceReport gini_importance(const TrainedModel& model);

// Logistic loss, templated on the scalar so gradient checks can run in
// extended precision. theta = [w; b]; the bias is not regularized.
//   loss = mean(softplus(z) - y z) + l2/2 |w|^2,  z = X w + b

template <class Scalar>
Scalar softplus(Scalar z) {
  using std::abs;
  using std::exp;
  using std::log1p;
  return (z > Scalar(0) ? z : Scalar(0)) + log1p(exp(-abs(z)));
}

template <class Scalar>
Scalar sigmoid(Scalar z) {
  using std::exp;
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-z));
  const Scalar e = exp(z);
  return e / (Scalar(1) + e);
}

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
Scalar logistic_loss(const MatrixX<Scalar>& x, const Eigen::VectorXi& y, const VectorX<Scalar>& theta,
                     Scalar l2) {
  const Eigen::Index d = x.cols();
  const VectorX<Scalar> z = (x * theta.head(d)).array() + theta[d];
  Scalar total(0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) total += softplus(z[i]) - Scalar(y[i]) * z[i];
  return total / Scalar(x.rows()) + l2 / Scalar(2) * theta.head(d).squaredNorm();
}

template <class Scalar>
VectorX<Scalar> logistic_gradient(const MatrixX<Scalar>& x, const Eigen::VectorXi& y,
                                  const VectorX<Scalar>& theta, Scalar l2) {
  const Eigen::Index d = x.cols();
  const VectorX<Scalar> z = (x * theta.head(d)).array() + theta[d];
  VectorX<Scalar> residual(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) residual[i] = sigmoid(z[i]) - Scalar(y[i]);
  VectorX<Scalar> g(d + 1);
  g.head(d) = x.transpose() * residual / Scalar(x.rows()) + l2 * theta.head(d);
  g[d] = residual.sum() / Scalar(x.rows());
  return g;
}

/// Logistic-regression fit on already standardized features; returns
/// theta = [w; b]. Exposed for gradient checks.
Eigen::VectorXd fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, const Hyperparams& hp,
                             int* iterations = nullptr);

}  // namespace roadsel::ml
