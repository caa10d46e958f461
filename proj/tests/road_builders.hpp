#pragma once

// Small exact road constructions shared by the test suites.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "roadsel/road.hpp"

namespace roadsel::testing {

/// Piecewise-constant curvature profile: (kappa [1/m], length [m]).
using Profile = std::vector<std::pair<double, double>>;

/// Exact integration of the profile from (x0, y0) with heading h0, emitting
/// points every `spacing` meters plus the final point.
inline Polyline render_profile(const Profile& profile, double x0, double y0, double h0,
                               double spacing) {
  Polyline pts{Point3(x0, y0, 0.0)};
  double x = x0;
  double y = y0;
  double h = h0;
  for (const auto& [kappa, length] : profile) {
    const int steps = std::max(1, static_cast<int>(std::ceil(length / spacing - 1e-9)));
    const double ds = length / steps;
    for (int i = 0; i < steps; ++i) {
      if (std::abs(kappa) < 1e-12) {
        x += ds * std::cos(h);
        y += ds * std::sin(h);
      } else {
        const double h1 = h + kappa * ds;
        x += (std::sin(h1) - std::sin(h)) / kappa;
        y -= (std::cos(h1) - std::cos(h)) / kappa;
        h = h1;
      }
      pts.emplace_back(x, y, 0.0);
    }
  }
  return pts;
}

inline RoadTest make_test(Polyline pts, std::string id = "t", double lane_width = 4.0) {
  RoadTest t;
  t.test_id = std::move(id);
  t.control_points = std::move(pts);
  t.lane_width = lane_width;
  return t;
}

inline RoadTest straight_test(double length, std::string id = "straight") {
  return make_test(render_profile({{0.0, length}}, 50.0, 50.0, 0.0, 10.0), std::move(id));
}

/// Counterclockwise arc of `degrees` around the center (cx, cy), control
/// points every `spacing` meters of arc.
inline Polyline arc_points(double radius, double degrees, double spacing, double cx = 100.0,
                           double cy = 100.0) {
  const double sweep = degrees * std::numbers::pi / 180.0;
  const int n = std::max(2, static_cast<int>(std::ceil(radius * sweep / spacing)));
  Polyline pts;
  for (int i = 0; i <= n; ++i) {
    const double a = -std::numbers::pi / 2 + sweep * i / n;
    pts.emplace_back(cx + radius * std::cos(a), cy + radius * std::sin(a), 0.0);
  }
  return pts;
}

/// Straight approach, 180-degree left arc of radius `radius`, straight exit.
inline RoadTest hairpin_test(double radius, double approach = 60.0) {
  return make_test(render_profile({{0.0, approach}, {1.0 / radius, std::numbers::pi * radius}, {0.0, approach}},
                                  100.0, 100.0, 0.0, 2.0),
                   "hairpin");
}

}  // namespace roadsel::testing
