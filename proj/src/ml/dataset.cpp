#include "roadsel/ml/dataset.hpp"

#include <cmath>

#include "roadsel/error.hpp"

namespace roadsel::ml {

const char* to_string(Family family) {
  switch (family) {
    case Family::naive_bayes: return "naive_bayes";
    case Family::logistic_regression: return "logistic_regression";
    case Family::random_forest: return "random_forest";
    case Family::gradient_boosting: return "gradient_boosting";
    case Family::svm: return "svm";
    case Family::decision_tree: return "decision_tree";
  }
  return "unknown";
}

const char* display_name(Family family) {
  switch (family) {
    case Family::naive_bayes: return "Naive Bayes";
    case Family::logistic_regression: return "Logistic Regression";
    case Family::random_forest: return "Random Forest";
    case Family::gradient_boosting: return "Gradient Boosting";
    case Family::svm: return "SVM";
    case Family::decision_tree: return "Decision Tree";
  }
  return "Unknown";
}

std::optional<Family> family_from_string(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

bool is_tree_family(Family family) {
  return family == Family::decision_tree || family == Family::random_forest ||
         family == Family::gradient_boosting;
}

std::size_t Dataset::positives() const {
  return static_cast<std::size_t>((y.array() == 1).count());
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.feature_names = feature_names;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), x.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    out.y[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
  }
  return out;
}

void check_dataset(const Dataset& data, bool require_both_classes) {
  if (data.x.rows() != data.y.size()) {
    throw Error(ErrorKind::invalid_data, "feature rows and labels differ in count");
  }
  if (data.x.rows() == 0 || data.x.cols() == 0) throw Error(ErrorKind::invalid_data, "empty dataset");
  if (!data.feature_names.empty() && data.feature_names.size() != data.features()) {
    throw Error(ErrorKind::invalid_data, "feature name count does not match arity");
  }
  if (!data.x.allFinite()) throw Error(ErrorKind::invalid_data, "dataset has non-finite features");
  for (Eigen::Index i = 0; i < data.y.size(); ++i) {
    if (data.y[i] != 0 && data.y[i] != 1) {
      throw Error(ErrorKind::invalid_data, "labels must be 0 (safe) or 1 (unsafe)");
    }
  }
  if (require_both_classes) {
    const std::size_t pos = data.positives();
    if (pos == 0 || pos == data.rows()) {
      throw Error(ErrorKind::degenerate_training, "training data contains a single class");
    }
  }
}

}  // namespace roadsel::ml
