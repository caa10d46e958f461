#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "roadsel/road.hpp"

namespace roadsel {

/// Random roads built from piecewise-constant curvature profiles.
struct GeneratorConfig {
  std::size_t count = 1;
  double map_size = 500.0;
  std::uint64_t seed = 0;
  int min_segments = 4;
  int max_segments = 12;
  double kappa_bound = 0.07;  ///< max |curvature|, 1/m
  double min_segment_length = 20.0;
  double max_segment_length = 80.0;
  double lane_width = 4.0;
  double control_spacing = 10.0;  ///< arc length between emitted control points
};

/// Throws Error(invalid_config) when the configuration is unusable.
void check_config(const GeneratorConfig& cfg);

/// Id used for the i-th generated test, zero padded so ids sort numerically.
std::string generated_test_id(std::size_t index, std::size_t count);

/// Exactly cfg.count tests, each passing validate(test, cfg.map_size).
/// Throws Error(generation_exhausted) after 1000 * count consecutive
/// rejected candidates.
std::vector<RoadTest> generate_tests(const GeneratorConfig& cfg);

}  // namespace roadsel
