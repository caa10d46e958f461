#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "roadsel/rng.hpp"

namespace roadsel::ml {

/// Split quality ties within this tolerance fall back to the lowest
/// feature index, then the lowest threshold.
inline constexpr double kSplitTieTolerance = 1e-12;

/// Flat binary tree node. Leaves have feature == -1.
/// Samples with x[feature] <= threshold go left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;     ///< P(unsafe) for classification, raw output for regression
  double impurity = 0.0;  ///< Gini or variance of the samples reaching the node
  double weight = 0.0;    ///< weighted training samples reaching the node
};

struct Tree {
  std::vector<TreeNode> nodes;

  bool empty() const { return nodes.empty(); }
  std::size_t leaf_index(const Eigen::Ref<const Eigen::VectorXd>& row) const;
  double predict(const Eigen::Ref<const Eigen::VectorXd>& row) const {
    return nodes[leaf_index(row)].value;
  }
  int depth() const;
};

struct SplitChoice {
  bool valid = false;
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  ///< weighted mean impurity of the two children
};

/// Gini impurity of a node with class weights w0 (safe) and w1 (unsafe).
double gini(double w0, double w1);

/// Midpoint between consecutive distinct values, never rounding up to `hi`.
double split_threshold(double lo, double hi);

/// True when (impurity, feature, threshold) beats `best` under the tie rule.
bool better_split(double impurity, int feature, double threshold, const SplitChoice& best);

/// Best Gini split of `rows` over `features` (midpoints of consecutive
/// distinct values).
SplitChoice best_gini_split(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                            std::span<const double> weights, std::span<const std::size_t> rows,
                            std::span<const int> features);

struct TreeParams {
  int max_depth = 10;    ///< <= 0 means unlimited
  int min_samples_split = 2;
  int max_features = 0;  ///< features tried per split; <= 0 means all
};

/// CART classification tree on Gini impurity. `weights[r]` is the
/// multiplicity of row r (0 excludes it). `rng` is only consulted when
/// max_features subsamples.
Tree grow_classification_tree(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                              std::span<const double> weights, const TreeParams& params, Rng* rng);

/// Least-squares regression tree on `target`. Leaf values are the mean
/// target; callers may overwrite them.
Tree grow_regression_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& target,
                          const TreeParams& params);

/// Weighted impurity decrease per feature, normalized by the root weight.
Eigen::VectorXd impurity_decrease(const Tree& tree, std::size_t features);

}  // namespace roadsel::ml
