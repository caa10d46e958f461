#include "roadsel/ml/tree.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace roadsel::ml {

namespace {

/// Node statistics and split search for one impurity criterion.
struct GiniCriterion {
  const Eigen::VectorXi& y;
  std::span<const double> w;

  struct Stats {
    double weight = 0.0;
    double impurity = 0.0;
    double value = 0.0;
  };

  Stats stats(std::span<const std::size_t> rows) const {
    double w0 = 0.0;
    double w1 = 0.0;
    for (std::size_t r : rows) (y[static_cast<Eigen::Index>(r)] == 1 ? w1 : w0) += w[r];
    return {w0 + w1, gini(w0, w1), w0 + w1 > 0.0 ? w1 / (w0 + w1) : 0.0};
  }

  /// `sorted` holds the node's rows ordered by the feature's value.
  void scan(const Eigen::MatrixXd& x, int feature, std::span<const std::size_t> sorted,
            SplitChoice& best) const {
    double total0 = 0.0;
    double total1 = 0.0;
    for (std::size_t r : sorted) (y[static_cast<Eigen::Index>(r)] == 1 ? total1 : total0) += w[r];
    const double total = total0 + total1;
    double l0 = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      const std::size_t r = sorted[i];
      (y[static_cast<Eigen::Index>(r)] == 1 ? l1 : l0) += w[r];
      const double a = x(static_cast<Eigen::Index>(r), feature);
      const double b = x(static_cast<Eigen::Index>(sorted[i + 1]), feature);
      if (!(a < b)) continue;
      const double lw = l0 + l1;
      const double rw = total - lw;
      const double impurity = (lw * gini(l0, l1) + rw * gini(total0 - l0, total1 - l1)) / total;
      const double threshold = split_threshold(a, b);
      if (better_split(impurity, feature, threshold, best)) best = {true, feature, threshold, impurity};
    }
  }
};

struct VarianceCriterion {
  const Eigen::VectorXd& target;

  struct Stats {
    double weight = 0.0;
    double impurity = 0.0;
    double value = 0.0;
  };

  Stats stats(std::span<const std::size_t> rows) const {
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t r : rows) {
      const double t = target[static_cast<Eigen::Index>(r)];
      sum += t;
      sq += t * t;
    }
    const double n = static_cast<double>(rows.size());
    if (rows.empty()) return {};
    const double mean = sum / n;
    return {n, std::max(0.0, sq / n - mean * mean), mean};
  }

  void scan(const Eigen::MatrixXd& x, int feature, std::span<const std::size_t> sorted,
            SplitChoice& best) const {
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t r : sorted) {
      const double t = target[static_cast<Eigen::Index>(r)];
      sum += t;
      sq += t * t;
    }
    const double n = static_cast<double>(sorted.size());
    double lsum = 0.0;
    double lsq = 0.0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      const std::size_t r = sorted[i];
      const double t = target[static_cast<Eigen::Index>(r)];
      lsum += t;
      lsq += t * t;
      const double a = x(static_cast<Eigen::Index>(r), feature);
      const double b = x(static_cast<Eigen::Index>(sorted[i + 1]), feature);
      if (!(a < b)) continue;
      const double ln = static_cast<double>(i + 1);
      const double rn = n - ln;
      const double rsum = sum - lsum;
      const double sse = std::max(0.0, lsq - lsum * lsum / ln) +
                         std::max(0.0, (sq - lsq) - rsum * rsum / rn);
      const double impurity = sse / n;
      const double threshold = split_threshold(a, b);
      if (better_split(impurity, feature, threshold, best)) best = {true, feature, threshold, impurity};
    }
  }
};

void sort_by_feature(const Eigen::MatrixXd& x, int feature, std::vector<std::size_t>& rows) {
  std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
    const double va = x(static_cast<Eigen::Index>(a), feature);
    const double vb = x(static_cast<Eigen::Index>(b), feature);
    return va < vb || (va == vb && a < b);
  });
}

bool constant_in(const Eigen::MatrixXd& x, int feature, std::span<const std::size_t> rows) {
  const double first = x(static_cast<Eigen::Index>(rows.front()), feature);
  return std::all_of(rows.begin(), rows.end(), [&](std::size_t r) {
    return x(static_cast<Eigen::Index>(r), feature) == first;
  });
}

template <class Criterion>
Tree grow(const Eigen::MatrixXd& x, std::vector<std::size_t> rows, const Criterion& criterion,
          const TreeParams& params, Rng* rng) {
  const int features = static_cast<int>(x.cols());
  const int tried_per_split =
      params.max_features > 0 ? std::min(params.max_features, features) : features;

  struct Pending {
    int node;
    std::size_t begin;
    std::size_t end;
    int depth;
  };

  Tree tree;
  if (rows.empty()) return tree;
  tree.nodes.emplace_back();
  std::vector<Pending> stack{{0, 0, rows.size(), 0}};
  std::vector<int> order(static_cast<std::size_t>(features));
  std::vector<std::size_t> scratch;

  while (!stack.empty()) {
    const Pending job = stack.back();
    stack.pop_back();
    const std::span<const std::size_t> node_rows(rows.data() + job.begin, job.end - job.begin);
    const auto st = criterion.stats(node_rows);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(job.node)];
    node.weight = st.weight;
    node.impurity = st.impurity;
    node.value = st.value;

    const bool depth_capped = params.max_depth > 0 && job.depth >= params.max_depth;
    if (st.impurity <= 0.0 || depth_capped ||
        node_rows.size() < static_cast<std::size_t>(std::max(2, params.min_samples_split))) {
      continue;
    }

    // Features are visited in a random order when subsampling; constant
    // features do not count toward the per-split budget.
    std::iota(order.begin(), order.end(), 0);
    SplitChoice best;
    int tried = 0;
    for (int k = 0; k < features && tried < tried_per_split; ++k) {
      if (tried_per_split < features && rng != nullptr) {
        const std::size_t pick = static_cast<std::size_t>(k) +
                                 rng->index(static_cast<std::size_t>(features - k));
        std::swap(order[static_cast<std::size_t>(k)], order[pick]);
      }
      const int f = order[static_cast<std::size_t>(k)];
      if (constant_in(x, f, node_rows)) continue;
      ++tried;
      scratch.assign(node_rows.begin(), node_rows.end());
      sort_by_feature(x, f, scratch);
      criterion.scan(x, f, scratch, best);
    }
    if (!best.valid) continue;

    auto mid = std::stable_partition(
        rows.begin() + static_cast<std::ptrdiff_t>(job.begin),
        rows.begin() + static_cast<std::ptrdiff_t>(job.end), [&](std::size_t r) {
          return x(static_cast<Eigen::Index>(r), best.feature) <= best.threshold;
        });
    const std::size_t split = static_cast<std::size_t>(mid - rows.begin());

    const int left = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const int right = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    TreeNode& parent = tree.nodes[static_cast<std::size_t>(job.node)];
    parent.feature = best.feature;
    parent.threshold = best.threshold;
    parent.left = left;
    parent.right = right;
    // Right child is pushed first so the left subtree is expanded first.
    stack.push_back({right, split, job.end, job.depth + 1});
    stack.push_back({left, job.begin, split, job.depth + 1});
  }
  return tree;
}

}  // namespace

std::size_t Tree::leaf_index(const Eigen::Ref<const Eigen::VectorXd>& row) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(row[n.feature] <= n.threshold ? n.left : n.right);
  }
  return i;
}

int Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
  int deepest = 0;
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (nodes[i].feature >= 0) {
      stack.push_back({static_cast<std::size_t>(nodes[i].left), d + 1});
      stack.push_back({static_cast<std::size_t>(nodes[i].right), d + 1});
    }
  }
  return deepest;
}

double gini(double w0, double w1) {
  const double total = w0 + w1;
  if (total <= 0.0) return 0.0;
  const double p0 = w0 / total;
  const double p1 = w1 / total;
  return 1.0 - p0 * p0 - p1 * p1;
}

double split_threshold(double lo, double hi) {
  const double mid = lo / 2.0 + hi / 2.0;
  return mid < hi ? mid : lo;
}

bool better_split(double impurity, int feature, double threshold, const SplitChoice& best) {
  if (!best.valid) return true;
  if (impurity < best.impurity - kSplitTieTolerance) return true;
  if (impurity > best.impurity + kSplitTieTolerance) return false;
  if (feature != best.feature) return feature < best.feature;
  return threshold < best.threshold;
}

SplitChoice best_gini_split(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                            std::span<const double> weights, std::span<const std::size_t> rows,
                            std::span<const int> features) {
  const GiniCriterion criterion{y, weights};
  SplitChoice best;
  std::vector<std::size_t> sorted;
  for (int f : features) {
    sorted.assign(rows.begin(), rows.end());
    sort_by_feature(x, f, sorted);
    criterion.scan(x, f, sorted, best);
  }
  return best;
}

Tree grow_classification_tree(const Eigen::MatrixXd& x, const Eigen::VectorXi& y,
                              std::span<const double> weights, const TreeParams& params, Rng* rng) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < weights.size(); ++r) {
    if (weights[r] > 0.0) rows.push_back(r);
  }
  return grow(x, std::move(rows), GiniCriterion{y, weights}, params, rng);
}

Tree grow_regression_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& target,
                          const TreeParams& params) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(x.rows()));
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return grow(x, std::move(rows), VarianceCriterion{target}, params, nullptr);
}

Eigen::VectorXd impurity_decrease(const Tree& tree, std::size_t features) {
  Eigen::VectorXd credit = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(features));
  if (tree.empty() || tree.nodes.front().weight <= 0.0) return credit;
  const double root = tree.nodes.front().weight;
  for (const TreeNode& n : tree.nodes) {
    if (n.feature < 0) continue;
    const TreeNode& l = tree.nodes[static_cast<std::size_t>(n.left)];
    const TreeNode& r = tree.nodes[static_cast<std::size_t>(n.right)];
    const double drop = n.weight * n.impurity - l.weight * l.impurity - r.weight * r.impurity;
    credit[n.feature] += std::max(0.0, drop) / root;
  }
  return credit;
}

}  // namespace roadsel::ml
