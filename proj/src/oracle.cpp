#include "roadsel/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "roadsel/error.hpp"

namespace roadsel {

namespace {

// Curvature used to bend the lane around the footprint is capped so that a
// body shifted toward the inside can never poke out of the outer edge.
constexpr double kMaxFootprintCurvature = 0.5;

Polyline right_lane_center(const Polyline& spine, double lane_width) {
  const std::size_t n = spine.size();
  Polyline lane(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point3& a = spine[i == 0 ? 0 : i - 1];
    const Point3& b = spine[i + 1 == n ? n - 1 : i + 1];
    Eigen::Vector2d t = (b - a).head<2>();
    t.normalize();
    const Eigen::Vector2d right(t.y(), -t.x());
    lane[i] = spine[i];
    lane[i].head<2>() += 0.5 * lane_width * right;
  }
  return lane;
}

}  // namespace

void check_config(const SimulationConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::invalid_config, msg); };
  if (!(cfg.rf > 0.0)) fail("rf must be > 0");
  if (!(cfg.oob > 0.0 && cfg.oob <= 1.0)) fail("oob must be in (0, 1]");
  if (!(cfg.timestep > 0.0)) fail("timestep must be > 0");
  if (!(cfg.speed_limit > 0.0)) fail("speed_limit must be > 0");
  if (!(cfg.base_lat_accel > 0.0)) fail("base_lat_accel must be > 0");
  if (!(cfg.driver.relaxation_length > 0.0)) fail("relaxation_length must be > 0");
  if (!(cfg.driver.path_step > 0.0)) fail("path_step must be > 0");
  if (!(cfg.driver.preview >= 0.0)) fail("preview must be >= 0");
  if (!(cfg.driver.grip > 0.0)) fail("grip must be > 0");
}

double footprint_outside_fraction(double offset, double curvature, double lane_width,
                                  const DriverModel& driver) {
  constexpr int kAcross = 5;
  constexpr int kAlong = 11;
  const double bend = std::min(std::abs(curvature), kMaxFootprintCurvature);
  const double half_lane = 0.5 * lane_width;
  int outside = 0;
  for (int a = 0; a < kAcross; ++a) {
    const double v = driver.vehicle_width * ((a + 0.5) / kAcross - 0.5);
    for (int l = 0; l < kAlong; ++l) {
      const double u = driver.vehicle_length * ((l + 0.5) / kAlong - 0.5);
      // Lane centre at longitudinal offset u sits bend*u^2/2 toward the inside.
      const double lateral = offset + v - 0.5 * bend * u * u;
      if (lateral > half_lane || lateral < -half_lane) ++outside;
    }
  }
  return static_cast<double>(outside) / (kAcross * kAlong);
}

double saturate_deviation(double raw, double lane_width, const DriverModel& driver) {
  const double limit = 0.5 * lane_width + driver.overshoot;
  return limit * (1.0 - std::exp(-raw / limit));
}

DriveTrace drive(const RoadTest& test, const SimulationConfig& cfg) {
  check_config(cfg);
  const Verdict verdict = validate(test, std::nullopt);
  if (!verdict) {
    throw Error(ErrorKind::invalid_road, "road '" + test.test_id + "' is not drivable: " +
                                             to_string(verdict.rule) + ": " + verdict.detail);
  }
  const DriverModel& drv = cfg.driver;
  const Polyline lane = right_lane_center(interpolate(test, drv.path_step), test.lane_width);
  const std::size_t n = lane.size();

  DriveTrace trace;
  trace.arc.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) trace.arc[i] = trace.arc[i - 1] + (lane[i] - lane[i - 1]).norm();

  std::vector<Eigen::Vector2d> tangent(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point3& a = lane[i == 0 ? 0 : i - 1];
    const Point3& b = lane[i + 1 == n ? n - 1 : i + 1];
    tangent[i] = (b - a).head<2>().normalized();
  }
  const std::vector<double> kappa = point_curvature(lane);

  // Commanded speed per sample, then the speed actually driven: the driver
  // only brakes for curves inside its preview and cannot exceed the
  // acceleration or braking limits, so sharp bends after fast stretches are
  // entered too fast.
  std::vector<double> commanded(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = std::abs(kappa[i]);
    commanded[i] = k > 0.0 ? std::min(cfg.speed_limit, std::sqrt(cfg.base_lat_accel * cfg.rf / k))
                           : cfg.speed_limit;
  }
  std::vector<double>& v = trace.speed;
  v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double planned = commanded[i];
    for (std::size_t j = i + 1; j < n && trace.arc[j] - trace.arc[i] <= drv.preview; ++j) {
      const double gap = trace.arc[j] - trace.arc[i];
      planned = std::min(planned, std::sqrt(commanded[j] * commanded[j] + 2.0 * drv.brake * gap));
    }
    if (i == 0) {
      v[i] = planned;
      continue;
    }
    const double ds = trace.arc[i] - trace.arc[i - 1];
    const double fastest = std::sqrt(v[i - 1] * v[i - 1] + 2.0 * drv.accel * ds);
    const double slowest = std::sqrt(std::max(0.0, v[i - 1] * v[i - 1] - 2.0 * drv.brake * ds));
    v[i] = std::max(slowest, std::min(planned, fastest));
  }

  // Pursuit of a point one lookahead ahead cuts the bend inside the window;
  // lateral demand beyond the tyre grip adds drift.
  const double lookahead = drv.lookahead_base * cfg.rf;
  trace.deviation.assign(n, 0.0);
  trace.oob_fraction.assign(n, 0.0);
  double raw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double bend = 0.0;
    double peak_kappa = 0.0;
    for (std::size_t j = i; j < n && trace.arc[j] - trace.arc[i] <= lookahead; ++j) {
      const Eigen::Vector2d d = (lane[j] - lane[i]).head<2>();
      bend = std::max(bend, std::abs(tangent[i].x() * d.y() - tangent[i].y() * d.x()));
      peak_kappa = std::max(peak_kappa, std::abs(kappa[j]));
    }
    const double excess = std::max(0.0, v[i] * v[i] * peak_kappa - drv.grip);
    const double target = drv.cut_gain * bend + drv.drift_gain * excess;
    // First-order lag: the offset settles toward its target over the
    // relaxation length, so short kinks disturb less than sustained bends.
    if (i == 0) {
      raw = target;
    } else {
      const double ds = trace.arc[i] - trace.arc[i - 1];
      raw += (target - raw) * (1.0 - std::exp(-ds / drv.relaxation_length));
    }
    trace.deviation[i] = saturate_deviation(raw, test.lane_width, drv);
    trace.oob_fraction[i] =
        footprint_outside_fraction(trace.deviation[i], kappa[i], test.lane_width, drv);
  }
  return trace;
}

SimulationResult label_test(const RoadTest& test, const SimulationConfig& cfg) {
  const DriveTrace trace = drive(test, cfg);
  const std::size_t n = trace.arc.size();

  SimulationResult result;
  for (std::size_t i = 0; i < n; ++i) {
    result.max_oob_fraction = std::max(result.max_oob_fraction, trace.oob_fraction[i]);
    if (!result.first_violation_arc_pos && trace.oob_fraction[i] >= cfg.oob) {
      result.first_violation_arc_pos = trace.arc[i];
    }
  }
  result.label = result.max_oob_fraction >= cfg.oob ? Label::unsafe : Label::safe;

  // Time integration along the speed profile (linear in arc position).
  const double total = trace.arc.back();
  double s = 0.0;
  double t = 0.0;
  std::size_t seg = 0;
  auto speed_at = [&](double pos) {
    while (seg + 2 < n && trace.arc[seg + 1] <= pos) ++seg;
    const double span = trace.arc[seg + 1] - trace.arc[seg];
    const double u = span > 0.0 ? std::clamp((pos - trace.arc[seg]) / span, 0.0, 1.0) : 0.0;
    return trace.speed[seg] + u * (trace.speed[seg + 1] - trace.speed[seg]);
  };
  while (true) {
    const double speed = speed_at(s);
    if (s + speed * cfg.timestep >= total) {
      t += (total - s) / speed;
      break;
    }
    s += speed * cfg.timestep;
    t += cfg.timestep;
  }
  result.sim_time = t;
  return result;
}

std::vector<SuiteEntry> label_suite(std::span<const RoadTest> tests, const SimulationConfig& cfg) {
  check_config(cfg);
  std::vector<SuiteEntry> out;
  out.reserve(tests.size());
  for (const RoadTest& test : tests) {
    SuiteEntry entry;
    try {
      entry.result = label_test(test, cfg);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace roadsel
