#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace roadsel {

using Point3 = Eigen::Vector3d;
using Polyline = std::vector<Point3>;

enum class Label { unlabeled, safe, unsafe };

const char* to_string(Label label);

/// A lane-keeping test: the road spine given by control points plus the
/// outcome of executing it, if it has been executed.
struct RoadTest {
  std::string test_id;
  Polyline control_points;
  double lane_width = 4.0;  ///< meters per lane; the road has two lanes
  Label label = Label::unlabeled;
  std::optional<double> sim_time;
  std::optional<double> rf;
  std::optional<double> oob;
};

enum class SegmentKind { straight, left_turn, right_turn };

const char* to_string(SegmentKind kind);

/// A maximal run of path edges sharing one turn classification.
///
/// Point indices are half-open, `[begin, end)`; the edge leaving the last
/// point of a segment belongs to that segment, so lengths tile the path.
struct Segment {
  SegmentKind kind = SegmentKind::straight;
  double length = 0.0;      ///< meters
  double turn_angle = 0.0;  ///< degrees, 0 for straights
  std::optional<double> pivot_radius;  ///< meters, absent for straights
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct SegmentedRoad {
  std::vector<Segment> segments;
  Polyline path;
};

/// Arc length of a polyline (x, y and z all count).
double arc_length(std::span<const Point3> path);

/// Throws Error(invalid_road) unless the control points form a usable road.
void check_road(const RoadTest& test);

/// Natural cubic spline through the control points (chord-length
/// parameterized), resampled at uniform arc-length `step`. The last interval
/// may be shorter; endpoints equal the first/last control points.
Polyline interpolate(std::span<const Point3> control_points, double step = 1.0);
Polyline interpolate(const RoadTest& test, double step = 1.0);

/// Signed planar curvature per edge (1/m, counterclockwise positive).
/// Vertex curvature is the heading change over the mean adjacent edge
/// length; each edge takes the mean of its two vertices, with the end
/// vertices extrapolated from their neighbors. Size is path.size() - 1.
std::vector<double> edge_curvature(std::span<const Point3> path);

/// Signed planar curvature per point (mean of adjacent edge curvatures).
std::vector<double> point_curvature(std::span<const Point3> path);

struct SegmentationOptions {
  /// Heading change, in degrees, that one `reference_length` of path must
  /// exceed to count as turning.
  double angle_threshold = 5.0;
  double reference_length = 10.0;
};

/// Groups consecutive edges into straight / left / right runs.
SegmentedRoad segmentize(Polyline path, const SegmentationOptions& options = {});

enum class ValidityRule {
  ok,
  malformed,
  out_of_bounds,
  radius_too_small,
  self_intersection,
};

const char* to_string(ValidityRule rule);

struct Verdict {
  ValidityRule rule = ValidityRule::ok;
  std::string detail;

  bool valid() const { return rule == ValidityRule::ok; }
  explicit operator bool() const { return valid(); }
};

/// Checks, in order: well-formed control points, all interpolated points in
/// [0, map_size]^2 (skipped when map_size is absent), every turn's pivot
/// radius >= 2 * lane_width, and no self-overlap of the two-lane road body.
Verdict validate(const RoadTest& test, std::optional<double> map_size);

}  // namespace roadsel
