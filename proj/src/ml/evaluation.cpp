#include "roadsel/ml/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "roadsel/error.hpp"
#include "roadsel/rng.hpp"

namespace roadsel::ml {

namespace {

std::vector<std::size_t> rows_of_class(const Eigen::VectorXi& labels, int cls) {
  std::vector<std::size_t> rows;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] == cls) rows.push_back(static_cast<std::size_t>(i));
  }
  return rows;
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
}

}  // namespace

SplitIndices stratified_split(const Eigen::VectorXi& labels, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorKind::invalid_config, "train fraction must be in (0, 1)");
  }
  Rng rng(seed);
  SplitIndices split;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> rows = rows_of_class(labels, cls);
    shuffle(rows, rng);
    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * rows.size() + 0.5));
    split.train.insert(split.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<std::vector<std::size_t>> stratified_folds(const Eigen::VectorXi& labels, std::size_t k,
                                                       std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(labels.size());
  if (k < 2) throw Error(ErrorKind::invalid_config, "cross-validation needs k >= 2");
  if (k > n) {
    throw Error(ErrorKind::invalid_config,
                "k = " + std::to_string(k) + " exceeds dataset size " + std::to_string(n));
  }
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  // Deal each class round-robin, continuing the rotation across classes so
  // fold sizes differ by at most one.
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> rows = rows_of_class(labels, cls);
    shuffle(rows, rng);
    for (std::size_t r : rows) {
      folds[next].push_back(r);
      next = (next + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

Metrics evaluate_split(Family family, const Dataset& data, const Hyperparams& hp, double split,
                       std::uint64_t seed) {
  check_dataset(data, true);
  const SplitIndices parts = stratified_split(data.y, split, seed);
  if (parts.test.empty()) throw Error(ErrorKind::invalid_data, "held-out part is empty");
  const Dataset train_set = data.subset(parts.train);
  const Dataset test_set = data.subset(parts.test);
  const TrainedModel model = train(family, train_set, hp, derive_seed(seed, 1));
  const Eigen::VectorXi pred = predict_all(model, test_set.x);
  return compute_metrics(std::span<const int>(pred.data(), static_cast<std::size_t>(pred.size())),
                         std::span<const int>(test_set.y.data(), static_cast<std::size_t>(test_set.y.size())));
}

CrossValidation cross_validate(Family family, const Dataset& data, const Hyperparams& hp,
                               const std::vector<std::vector<std::size_t>>& folds, std::uint64_t seed) {
  check_dataset(data, true);
  CrossValidation cv;
  Confusion pooled;
  std::vector<char> in_fold(data.rows());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::fill(in_fold.begin(), in_fold.end(), 0);
    for (std::size_t r : folds[f]) in_fold[r] = 1;
    std::vector<std::size_t> train_rows;
    for (std::size_t r = 0; r < data.rows(); ++r) {
      if (!in_fold[r]) train_rows.push_back(r);
    }
    const Dataset train_set = data.subset(train_rows);
    const Dataset test_set = data.subset(folds[f]);
    const TrainedModel model = train(family, train_set, hp, derive_seed(seed, f));
    const Eigen::VectorXi pred = predict_all(model, test_set.x);
    const Metrics m = compute_metrics(
        std::span<const int>(pred.data(), static_cast<std::size_t>(pred.size())),
        std::span<const int>(test_set.y.data(), static_cast<std::size_t>(test_set.y.size())));
    pooled += m.confusion;
    cv.folds.push_back(m);
  }
  cv.aggregate = metrics_from_confusion(pooled);
  return cv;
}

CrossValidation cross_validate(Family family, const Dataset& data, const Hyperparams& hp, std::size_t k,
                               std::uint64_t seed) {
  check_dataset(data, true);
  return cross_validate(family, data, hp, stratified_folds(data.y, k, seed), derive_seed(seed, 0x5eed));
}

BenchmarkReport benchmark_all(const Dataset& data, const Hyperparams& hp, std::size_t k,
                              std::uint64_t seed) {
  check_dataset(data, true);
  BenchmarkReport report;
  report.folds = stratified_folds(data.y, k, seed);
  for (Family family : kAllFamilies) {
    report.ranking.push_back({family, cross_validate(family, data, hp, report.folds, derive_seed(seed, 0x5eed))});
  }
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [](const BenchmarkRow& a, const BenchmarkRow& b) {
                     if (a.cv.aggregate.f1 != b.cv.aggregate.f1) return a.cv.aggregate.f1 > b.cv.aggregate.f1;
                     if (a.cv.aggregate.precision != b.cv.aggregate.precision) {
                       return a.cv.aggregate.precision > b.cv.aggregate.precision;
                     }
                     return std::strcmp(to_string(a.family), to_string(b.family)) < 0;
                   });
  return report;
}

}  // namespace roadsel::ml
