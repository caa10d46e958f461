#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace roadsel::ml {

enum class Family {
  naive_bayes,
  logistic_regression,
  random_forest,
  gradient_boosting,
  svm,
  decision_tree,
};

inline constexpr std::array<Family, 6> kAllFamilies = {
    Family::naive_bayes, Family::logistic_regression, Family::random_forest,
    Family::gradient_boosting, Family::svm, Family::decision_tree};

/// Identifier used in files ("random_forest").
const char* to_string(Family family);
/// Human-readable name ("Random Forest").
const char* display_name(Family family);
std::optional<Family> family_from_string(std::string_view name);
bool is_tree_family(Family family);

/// Binary classification data: one row per sample, label 1 = unsafe.
struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;
  std::vector<std::string> feature_names;

  std::size_t rows() const { return static_cast<std::size_t>(x.rows()); }
  std::size_t features() const { return static_cast<std::size_t>(x.cols()); }
  std::size_t positives() const;

  Dataset subset(std::span<const std::size_t> rows) const;
};

/// Throws Error(invalid_data) for shape problems, non-finite features or
/// labels outside {0, 1}; Error(degenerate_training) when
/// `require_both_classes` and one class is missing.
void check_dataset(const Dataset& data, bool require_both_classes);

}  // namespace roadsel::ml
