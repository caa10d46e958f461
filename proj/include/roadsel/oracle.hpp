#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadsel/road.hpp"

namespace roadsel {

/// Constants of the analytic driver. They are not user-facing knobs; the
/// defaults are what the labels in this project are calibrated against.
struct DriverModel {
  double lookahead_base = 5.0;     ///< L0, m; lookahead is L0 * rf
  double cut_gain = 0.3;           ///< fraction of the lookahead bend the driver cuts
  double drift_gain = 1.0;         ///< s^2; lateral drift per m/s^2 of demand above grip
  double grip = 7.0;               ///< m/s^2 lateral acceleration the tyres hold without sliding
  double accel = 2.0;              ///< m/s^2 longitudinal acceleration limit
  double brake = 3.0;              ///< m/s^2 braking limit
  double preview = 10.0;           ///< m of road ahead the driver plans its speed for
  double vehicle_width = 1.8;
  double vehicle_length = 4.2;
  double overshoot = 0.5;          ///< m the vehicle centre may pass the lane edge
  double relaxation_length = 10.0; ///< m of travel for the offset to settle toward its target
  double path_step = 1.0;          ///< m, sampling of the driven path
};

struct SimulationConfig {
  double rf = 1.5;
  double oob = 0.5;
  double speed_limit = 22.0;     ///< m/s
  double base_lat_accel = 3.5;   ///< m/s^2
  double timestep = 0.05;        ///< s
  DriverModel driver{};
};

/// Throws Error(invalid_config) when a field is out of range.
void check_config(const SimulationConfig& cfg);

struct SimulationResult {
  Label label = Label::safe;
  double sim_time = 0.0;
  double max_oob_fraction = 0.0;
  std::optional<double> first_violation_arc_pos;
};

/// Per-sample trace of one run, exposed for tests and diagnostics.
struct DriveTrace {
  std::vector<double> arc;          ///< lane-centre arc position, m
  std::vector<double> speed;        ///< m/s
  std::vector<double> deviation;    ///< lateral offset toward the inside, m
  std::vector<double> oob_fraction;
};

/// Sampled fraction of the vehicle footprint outside a lane of width
/// `lane_width` when the body centre is shifted `offset` toward the inside
/// of a bend of curvature `curvature` (1/m, magnitude).
double footprint_outside_fraction(double offset, double curvature, double lane_width,
                                  const DriverModel& driver);

/// Bounded lateral offset produced by a raw (unbounded) deviation.
double saturate_deviation(double raw, double lane_width, const DriverModel& driver);

DriveTrace drive(const RoadTest& test, const SimulationConfig& cfg);

/// Drives the test's right lane and labels it unsafe when the maximum
/// footprint fraction outside the lane reaches cfg.oob.
/// Throws Error(invalid_road) for tests that fail road validation.
SimulationResult label_test(const RoadTest& test, const SimulationConfig& cfg);

/// Element-wise label_test; failures are captured per entry.
struct SuiteEntry {
  std::optional<SimulationResult> result;
  std::string error;
};

std::vector<SuiteEntry> label_suite(std::span<const RoadTest> tests, const SimulationConfig& cfg);

}  // namespace roadsel
