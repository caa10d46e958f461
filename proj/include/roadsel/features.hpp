#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadsel/road.hpp"

namespace roadsel {

inline constexpr std::size_t kFeatureCount = 16;

/// Model-input feature names, in FeatureVector::values() order.
const std::array<std::string, kFeatureCount>& feature_names();

/// Road attributes and per-turn statistics of one test.
struct FeatureVector {
  std::string test_id;
  double direct_distance = 0.0;
  double road_distance = 0.0;
  int num_l_turns = 0;
  int num_r_turns = 0;
  int num_straights = 0;
  double total_angle = 0.0;
  double median_angle = 0.0;
  double std_angle = 0.0;
  double max_angle = 0.0;
  double min_angle = 0.0;
  double mean_angle = 0.0;
  double median_pivot_off = 0.0;
  double std_pivot_off = 0.0;
  double max_pivot_off = 0.0;
  double min_pivot_off = 0.0;
  double mean_pivot_off = 0.0;
  std::optional<double> sim_time;
  Label label = Label::unlabeled;

  std::array<double, kFeatureCount> values() const;
};

/// Order statistics over a sample; std is the population deviation.
/// All fields are 0 for an empty sample.
struct Summary {
  double median = 0.0;
  double std = 0.0;
  double max = 0.0;
  double min = 0.0;
  double mean = 0.0;
};

Summary summarize(std::vector<double> sample);

/// Features of an already segmented road (no label / sim_time).
FeatureVector extract_features(const SegmentedRoad& road, std::span<const Point3> control_points);

/// Interpolates and segments the road, then aggregates per-turn metrics.
/// Label and sim_time are copied from the test.
FeatureVector extract_features(const RoadTest& test, const SegmentationOptions& options = {},
                               double step = 1.0);

struct ExtractionEntry {
  std::optional<FeatureVector> features;
  std::string test_id;
  std::string error;
};

/// Element-wise extract_features; order preserved, failures recorded.
std::vector<ExtractionEntry> extract_suite(std::span<const RoadTest> tests,
                                           const SegmentationOptions& options = {});

}  // namespace roadsel
