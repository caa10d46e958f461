#include "roadsel/ml/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roadsel/error.hpp"
#include "roadsel/rng.hpp"

namespace roadsel::ml {

namespace {

NaiveBayesParams fit_naive_bayes(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, const Hyperparams& hp) {
  const Eigen::Index d = x.cols();
  NaiveBayesParams p;
  p.mean = Eigen::MatrixXd::Zero(2, d);
  p.variance = Eigen::MatrixXd::Zero(2, d);
  Eigen::Vector2d count = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    count[y[i]] += 1.0;
    p.mean.row(y[i]) += x.row(i);
  }
  for (int c = 0; c < 2; ++c) p.mean.row(c) /= count[c];
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    p.variance.row(y[i]) += (x.row(i) - p.mean.row(y[i])).array().square().matrix();
  }
  for (int c = 0; c < 2; ++c) {
    p.variance.row(c) /= count[c];
    p.variance.row(c) = p.variance.row(c).array().max(hp.variance_floor);
  }
  const double n = static_cast<double>(x.rows());
  p.log_prior << std::log(count[0] / n), std::log(count[1] / n);
  return p;
}

double naive_bayes_score(const NaiveBayesParams& p, const Eigen::VectorXd& z) {
  // Log-odds of unsafe vs safe; the 2*pi terms cancel.
  double odds = p.log_prior[1] - p.log_prior[0];
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const double v0 = p.variance(0, j);
    const double v1 = p.variance(1, j);
    const double d0 = z[j] - p.mean(0, j);
    const double d1 = z[j] - p.mean(1, j);
    odds += 0.5 * std::log(v0 / v1) + d0 * d0 / (2.0 * v0) - d1 * d1 / (2.0 * v1);
  }
  if (std::isnan(odds)) return 0.5;
  return sigmoid(odds);
}

LinearParams fit_svm(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, const Hyperparams& hp) {
  // Full-batch Pegasos: subgradient steps of size 1/(l2 t), projected onto
  // the ball that must contain the optimum. The bias rides along as a
  // constant feature. The best objective seen is kept.
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Eigen::MatrixXd xa(n, d + 1);
  xa << x, Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd sign = (2 * y.array() - 1).cast<double>();
  const double radius = 1.0 / std::sqrt(hp.l2);

  auto objective = [&](const Eigen::VectorXd& w) {
    const Eigen::ArrayXd margin = sign.array() * (xa * w).array();
    return (1.0 - margin).max(0.0).mean() + 0.5 * hp.l2 * w.squaredNorm();
  };

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd best = w;
  double best_obj = objective(w);
  for (int t = 1; t <= hp.svm_iterations; ++t) {
    const double eta = 1.0 / (hp.l2 * t);
    const Eigen::ArrayXd margin = sign.array() * (xa * w).array();
    Eigen::VectorXd push = Eigen::VectorXd::Zero(d + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (margin[i] < 1.0) push += sign[i] * xa.row(i).transpose();
    }
    w = (1.0 - eta * hp.l2) * w + (eta / static_cast<double>(n)) * push;
    const double norm = w.norm();
    if (norm > radius) w *= radius / norm;
    const double obj = objective(w);
    if (obj < best_obj) {
      best_obj = obj;
      best = w;
    }
  }
  return {best.head(d), best[d]};
}

BoostingParams fit_boosting(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, const Hyperparams& hp) {
  const Eigen::Index n = x.rows();
  const double prevalence = y.cast<double>().mean();
  BoostingParams p;
  p.initial = std::log(prevalence / (1.0 - prevalence));
  p.shrinkage = hp.shrinkage;
  Eigen::VectorXd f = Eigen::VectorXd::Constant(n, p.initial);
  const TreeParams tree_params{hp.boosting_depth, 2, 0};

  for (int round = 0; round < hp.boosting_rounds; ++round) {
    Eigen::VectorXd prob(n);
    for (Eigen::Index i = 0; i < n; ++i) prob[i] = sigmoid(f[i]);
    const Eigen::VectorXd residual = y.cast<double>() - prob;
    Tree tree = grow_regression_tree(x, residual, tree_params);

    // One Newton step per leaf: sum(residual) / sum(p (1 - p)).
    std::vector<double> num(tree.nodes.size(), 0.0);
    std::vector<double> den(tree.nodes.size(), 0.0);
    std::vector<std::size_t> leaf(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      leaf[static_cast<std::size_t>(i)] = tree.leaf_index(x.row(i).transpose());
      num[leaf[static_cast<std::size_t>(i)]] += residual[i];
      den[leaf[static_cast<std::size_t>(i)]] += prob[i] * (1.0 - prob[i]);
    }
    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      if (tree.nodes[k].feature < 0) tree.nodes[k].value = den[k] > 1e-150 ? num[k] / den[k] : 0.0;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      f[i] += hp.shrinkage * tree.nodes[leaf[static_cast<std::size_t>(i)]].value;
    }
    p.trees.push_back(std::move(tree));
  }
  return p;
}

ForestParams fit_forest(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, const Hyperparams& hp,
                        std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(x.rows());
  const int d = static_cast<int>(x.cols());
  TreeParams params;
  params.max_depth = hp.max_depth;
  params.max_features = hp.max_features < 0
                            ? static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))))
                            : hp.max_features;
  ForestParams forest;
  for (int t = 0; t < hp.forest_trees; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<double> weights(n, hp.bootstrap ? 0.0 : 1.0);
    if (hp.bootstrap) {
      for (std::size_t k = 0; k < n; ++k) weights[rng.index(n)] += 1.0;
    }
    forest.trees.push_back(grow_classification_tree(x, y, weights, params, &rng));
  }
  return forest;
}

}  // namespace

Scaler Scaler::fit(const Eigen::MatrixXd& x) {
  Scaler s;
  s.mean = x.colwise().mean().transpose();
  s.scale.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - s.mean[j]).square().mean();
    const double sd = std::sqrt(var);
    s.scale[j] = sd > 1e-12 * std::max(1.0, std::abs(s.mean[j])) ? sd : 1.0;
  }
  return s;
}

Scaler Scaler::identity(std::size_t features) {
  const auto d = static_cast<Eigen::Index>(features);
  return {Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)};
}

Eigen::MatrixXd Scaler::apply(const Eigen::MatrixXd& x) const {
  return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

Eigen::VectorXd Scaler::apply(const Eigen::Ref<const Eigen::VectorXd>& row) const {
  return (row - mean).cwiseQuotient(scale);
}

Eigen::VectorXd fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXi& y, const Hyperparams& hp,
                             int* iterations) {
  // Gradient descent with Barzilai-Borwein trial steps and an Armijo
  // backtracking guard.
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(x.cols() + 1);
  double loss = logistic_loss<double>(x, y, theta, hp.l2);
  Eigen::VectorXd grad = logistic_gradient<double>(x, y, theta, hp.l2);
  double step = 1.0;
  int it = 0;
  for (; it < hp.lr_max_iterations && grad.norm() >= hp.lr_tolerance; ++it) {
    const double g2 = grad.squaredNorm();
    double t = step;
    Eigen::VectorXd candidate = theta - t * grad;
    double cand_loss = logistic_loss<double>(x, y, candidate, hp.l2);
    while (cand_loss > loss - 1e-4 * t * g2 && t > 1e-12) {
      t *= 0.5;
      candidate = theta - t * grad;
      cand_loss = logistic_loss<double>(x, y, candidate, hp.l2);
    }
    if (cand_loss > loss) break;  // no descent possible at machine precision
    const Eigen::VectorXd cand_grad = logistic_gradient<double>(x, y, candidate, hp.l2);
    const Eigen::VectorXd s = candidate - theta;
    const Eigen::VectorXd dy = cand_grad - grad;
    const double sy = s.dot(dy);
    step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-8, 1e8) : 1.0;
    theta = candidate;
    loss = cand_loss;
    grad = cand_grad;
  }
  if (iterations) *iterations = it;
  return theta;
}

TrainedModel train(Family family, const Dataset& data, const Hyperparams& hp, std::uint64_t seed) {
  check_dataset(data, true);
  TrainedModel model;
  model.family = family;
  model.feature_names = data.feature_names;
  if (model.feature_names.empty()) {
    for (std::size_t j = 0; j < data.features(); ++j) model.feature_names.push_back("f" + std::to_string(j));
  }

  if (is_tree_family(family)) {
    model.scaler = Scaler::identity(data.features());
  } else {
    model.scaler = Scaler::fit(data.x);
  }

  switch (family) {
    case Family::naive_bayes:
      model.params = fit_naive_bayes(model.scaler.apply(data.x), data.y, hp);
      break;
    case Family::logistic_regression: {
      const Eigen::VectorXd theta = fit_logistic(model.scaler.apply(data.x), data.y, hp);
      const Eigen::Index d = data.x.cols();
      model.params = LinearParams{theta.head(d), theta[d]};
      break;
    }
    case Family::svm:
      model.params = fit_svm(model.scaler.apply(data.x), data.y, hp);
      break;
    case Family::decision_tree: {
      TreeParams params;
      params.max_depth = hp.max_depth;
      const std::vector<double> weights(data.rows(), 1.0);
      ForestParams forest;
      forest.trees.push_back(grow_classification_tree(data.x, data.y, weights, params, nullptr));
      model.params = std::move(forest);
      break;
    }
    case Family::random_forest:
      model.params = fit_forest(data.x, data.y, hp, seed);
      break;
    case Family::gradient_boosting:
      model.params = fit_boosting(data.x, data.y, hp);
      break;
  }
  return model;
}

double score(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& row) {
  if (static_cast<std::size_t>(row.size()) != model.features()) {
    throw Error(ErrorKind::invalid_data, "feature arity " + std::to_string(row.size()) +
                                             " does not match model arity " +
                                             std::to_string(model.features()));
  }
  const Eigen::VectorXd z = model.scaler.apply(row);
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, NaiveBayesParams>) {
          return naive_bayes_score(p, z);
        } else if constexpr (std::is_same_v<P, LinearParams>) {
          return sigmoid(p.weights.dot(z) + p.bias);
        } else if constexpr (std::is_same_v<P, ForestParams>) {
          if (p.trees.empty()) return 0.0;
          double total = 0.0;
          for (const Tree& t : p.trees) total += t.predict(z);
          return std::clamp(total / static_cast<double>(p.trees.size()), 0.0, 1.0);
        } else {
          double f = p.initial;
          for (const Tree& t : p.trees) f += p.shrinkage * t.predict(z);
          return sigmoid(f);
        }
      },
      model.params);
}

Eigen::VectorXd score_all(const TrainedModel& model, const Eigen::MatrixXd& x) {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = score(model, Eigen::VectorXd(x.row(i).transpose()));
  return out;
}

int predict(const TrainedModel& model, const Eigen::Ref<const Eigen::VectorXd>& row) {
  return score(model, row) >= 0.5 ? 1 : 0;
}

Eigen::VectorXi predict_all(const TrainedModel& model, const Eigen::MatrixXd& x) {
  Eigen::VectorXi out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = predict(model, Eigen::VectorXd(x.row(i).transpose()));
  return out;
}

ImportanceReport gini_importance(const TrainedModel& model) {
  if (!is_tree_family(model.family)) {
    throw Error(ErrorKind::unsupported_model,
                std::string("impurity importance is undefined for ") + to_string(model.family));
  }
  const std::vector<Tree>* trees = nullptr;
  if (const auto* forest = std::get_if<ForestParams>(&model.params)) {
    trees = &forest->trees;
  } else if (const auto* boost = std::get_if<BoostingParams>(&model.params)) {
    trees = &boost->trees;
  } else {
    throw Error(ErrorKind::unsupported_model, "tree family without tree parameters");
  }

  ImportanceReport report;
  report.feature_names = model.feature_names;
  report.importance = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.features()));
  if (trees->empty()) return report;
  for (const Tree& t : *trees) report.importance += impurity_decrease(t, model.features());
  report.importance /= static_cast<double>(trees->size());
  const double total = report.importance.sum();
  if (total > 0.0) report.importance /= total;
  return report;
}

}  // namespace roadsel::ml
