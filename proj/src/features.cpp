#include "roadsel/features.hpp"

#include <algorithm>
#include <cmath>

#include "roadsel/error.hpp"

namespace roadsel {

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "direct_distance", "road_distance",    "num_l_turns",   "num_r_turns",
      "num_straights",   "total_angle",      "median_angle",  "std_angle",
      "max_angle",       "min_angle",        "mean_angle",    "median_pivot_off",
      "std_pivot_off",   "max_pivot_off",    "min_pivot_off", "mean_pivot_off"};
  return names;
}

std::array<double, kFeatureCount> FeatureVector::values() const {
  return {direct_distance,
          road_distance,
          static_cast<double>(num_l_turns),
          static_cast<double>(num_r_turns),
          static_cast<double>(num_straights),
          total_angle,
          median_angle,
          std_angle,
          max_angle,
          min_angle,
          mean_angle,
          median_pivot_off,
          std_pivot_off,
          max_pivot_off,
          min_pivot_off,
          mean_pivot_off};
}

Summary summarize(std::vector<double> sample) {
  Summary s;
  if (sample.empty()) return s;
  std::sort(sample.begin(), sample.end());
  const std::size_t n = sample.size();
  s.min = sample.front();
  s.max = sample.back();
  s.median = n % 2 == 1 ? sample[n / 2] : 0.5 * (sample[n / 2 - 1] + sample[n / 2]);
  double sum = 0.0;
  for (double x : sample) sum += x;
  s.mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (double x : sample) sq += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(n));
  // Rounding can push the mean a hair outside [min, max] for constant samples.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

FeatureVector extract_features(const SegmentedRoad& road, std::span<const Point3> control_points) {
  FeatureVector fv;
  fv.direct_distance = (control_points.back() - control_points.front()).norm();
  fv.road_distance = arc_length(road.path);

  std::vector<double> angles;
  std::vector<double> radii;
  for (const Segment& seg : road.segments) {
    switch (seg.kind) {
      case SegmentKind::straight: ++fv.num_straights; continue;
      case SegmentKind::left_turn: ++fv.num_l_turns; break;
      case SegmentKind::right_turn: ++fv.num_r_turns; break;
    }
    angles.push_back(seg.turn_angle);
    radii.push_back(*seg.pivot_radius);
    fv.total_angle += seg.turn_angle;
  }
  // Chord can't exceed the path it spans; guard against spline round-off.
  fv.direct_distance = std::min(fv.direct_distance, fv.road_distance);

  const Summary a = summarize(std::move(angles));
  fv.median_angle = a.median;
  fv.std_angle = a.std;
  fv.max_angle = a.max;
  fv.min_angle = a.min;
  fv.mean_angle = a.mean;
  const Summary r = summarize(std::move(radii));
  fv.median_pivot_off = r.median;
  fv.std_pivot_off = r.std;
  fv.max_pivot_off = r.max;
  fv.min_pivot_off = r.min;
  fv.mean_pivot_off = r.mean;
  return fv;
}

FeatureVector extract_features(const RoadTest& test, const SegmentationOptions& options, double step) {
  const SegmentedRoad road = segmentize(interpolate(test, step), options);
  FeatureVector fv = extract_features(road, test.control_points);
  fv.test_id = test.test_id;
  fv.label = test.label;
  fv.sim_time = test.sim_time;
  return fv;
}

std::vector<ExtractionEntry> extract_suite(std::span<const RoadTest> tests,
                                           const SegmentationOptions& options) {
  std::vector<ExtractionEntry> out;
  out.reserve(tests.size());
  for (const RoadTest& test : tests) {
    ExtractionEntry entry;
    entry.test_id = test.test_id;
    try {
      entry.features = extract_features(test, options);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace roadsel
