#pragma once

#include <cstddef>
#include <span>

namespace roadsel::ml {

/// Confusion counts with unsafe (label 1) as the positive class.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Confusion confusion;
};

/// Harmonic mean of precision and recall; 0 when both are 0.
double f1_score(double precision, double recall);

Metrics metrics_from_confusion(const Confusion& c);

/// Zero denominators yield 0. Throws Error(invalid_data) on length mismatch
/// or empty input.
Metrics compute_metrics(std::span<const int> predictions, std::span<const int> truths);

}  // namespace roadsel::ml
