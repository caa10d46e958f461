#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roadsel/features.hpp"
#include "roadsel/ml/dataset.hpp"
#include "roadsel/ml/models.hpp"

namespace roadsel {

struct Prediction {
  std::string test_id;
  double score = 0.0;  ///< P(unsafe)
  Label predicted = Label::safe;
};

/// Scores every feature vector; order preserved. Stored labels are ignored.
/// Throws Error(invalid_data) if the model was not trained on the
/// 16-feature layout.
std::vector<Prediction> predict_tests(const ml::TrainedModel& model, std::span<const FeatureVector> features);

struct Scored {
  std::string test_id;
  double score = 0.0;
};

/// Indices of the k highest scores, best first; ties go to the
/// lexicographically smaller test_id. Returns all candidates if fewer than k.
std::vector<std::size_t> select_top_k(std::span<const Scored> candidates, std::size_t k = 10);

/// Uniform sample of min(k, n) distinct indices out of n.
std::vector<std::size_t> random_baseline(std::size_t n, std::size_t k, std::uint64_t seed);

/// One executed test of the held-out pool.
struct PoolEntry {
  std::string test_id;
  double score = 0.0;
  bool unsafe = false;
  double sim_time = 0.0;
};

struct SelectionResult {
  std::vector<Scored> selected;
  std::size_t unsafe_found = 0;
  double total_sim_time = 0.0;
  double cost_effectiveness = 0.0;  ///< unsafe tests per second
};

/// Unsafe count over summed simulation time. Throws Error(invalid_data)
/// when total_sim_time is not positive.
double cost_effectiveness(std::size_t unsafe_found, double total_sim_time);

SelectionResult summarize_selection(std::span<const PoolEntry> pool, std::span<const std::size_t> chosen);

/// Per-mille with one decimal, halves rounded up: 0.004 -> "4.0‰".
std::string format_per_mille(double ce);

/// Model input matrix from feature vectors. With `require_labels`, every row
/// must be labeled; otherwise unlabeled rows get label 0.
ml::Dataset make_dataset(std::span<const FeatureVector> rows, bool require_labels);

struct CostEffectivenessRow {
  ml::Family family = ml::Family::decision_tree;
  std::vector<double> guided;    ///< CE per repetition
  std::vector<double> baseline;  ///< CE per repetition
  double guided_mean = 0.0;
  double baseline_mean = 0.0;
};

struct CostEffectivenessReport {
  std::size_t k = 10;
  std::size_t repetitions = 20;
  std::size_t pool_size = 0;  ///< held-out tests per repetition (first split)
  std::vector<CostEffectivenessRow> rows;
};

/// Repeats: stratified 80/20 split, train each family on the 80%, select
/// top-k and a random k from the 20%, replay stored labels and sim_times.
/// Throws Error(invalid_data) for unlabeled rows or missing sim_time.
CostEffectivenessReport evaluate_cost_effectiveness(std::span<const FeatureVector> rows,
                                                    std::span<const ml::Family> families, std::size_t k,
                                                    std::size_t repetitions, std::uint64_t seed,
                                                    const ml::Hyperparams& hp = {});

}  // namespace roadsel
