#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "roadsel/ml/dataset.hpp"
#include "roadsel/ml/metrics.hpp"
#include "roadsel/ml/models.hpp"

namespace roadsel::ml {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded per-class shuffle; round-half-up train_fraction of each class
/// goes to training. Index lists are sorted.
SplitIndices stratified_split(const Eigen::VectorXi& labels, double train_fraction, std::uint64_t seed);

/// k stratified folds: pairwise disjoint, covering every row, sizes
/// differing by at most one. Throws Error(invalid_config) if k < 2 or
/// k > rows.
std::vector<std::vector<std::size_t>> stratified_folds(const Eigen::VectorXi& labels, std::size_t k,
                                                       std::uint64_t seed);

/// Train on a stratified `split` fraction, evaluate on the rest.
Metrics evaluate_split(Family family, const Dataset& data, const Hyperparams& hp, double split,
                       std::uint64_t seed);

struct CrossValidation {
  std::vector<Metrics> folds;
  Metrics aggregate;  ///< from pooled confusion counts
};

CrossValidation cross_validate(Family family, const Dataset& data, const Hyperparams& hp,
                               const std::vector<std::vector<std::size_t>>& folds, std::uint64_t seed);
CrossValidation cross_validate(Family family, const Dataset& data, const Hyperparams& hp, std::size_t k,
                               std::uint64_t seed);

struct BenchmarkRow {
  Family family;
  CrossValidation cv;
};

struct BenchmarkReport {
  std::vector<std::vector<std::size_t>> folds;
  /// Best first: aggregate F1 desc, then precision desc, then family name.
  std::vector<BenchmarkRow> ranking;
};

BenchmarkReport benchmark_all(const Dataset& data, const Hyperparams& hp, std::size_t k,
                              std::uint64_t seed);

}  // namespace roadsel::ml
