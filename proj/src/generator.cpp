#include "roadsel/generator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "roadsel/error.hpp"
#include "roadsel/rng.hpp"

namespace roadsel {

namespace {

struct Pose {
  double x;
  double y;
  double heading;
};

struct Piece {
  double kappa;
  double length;
};

Pose advance(const Pose& p, double kappa, double t) {
  if (std::abs(kappa) < 1e-12) {
    return {p.x + t * std::cos(p.heading), p.y + t * std::sin(p.heading), p.heading};
  }
  const double h = p.heading + kappa * t;
  return {p.x + (std::sin(h) - std::sin(p.heading)) / kappa,
          p.y - (std::cos(h) - std::cos(p.heading)) / kappa, h};
}

Polyline render(const Pose& start, const std::vector<Piece>& pieces, double spacing) {
  double total = 0.0;
  for (const Piece& piece : pieces) total += piece.length;

  // Regular samples every `spacing` metres; the final interval is kept at
  // least half a spacing long so the spline has no tiny end interval.
  std::vector<double> stations;
  for (double s = 0.0; s < total - 0.5 * spacing; s += spacing) stations.push_back(s);
  stations.push_back(total);

  Polyline out;
  Pose pose = start;
  double piece_start = 0.0;
  std::size_t piece = 0;
  for (double s : stations) {
    while (piece + 1 < pieces.size() && s > piece_start + pieces[piece].length) {
      pose = advance(pose, pieces[piece].kappa, pieces[piece].length);
      piece_start += pieces[piece].length;
      ++piece;
    }
    const Pose at = advance(pose, pieces[piece].kappa, s - piece_start);
    out.emplace_back(at.x, at.y, 0.0);
  }
  return out;
}

}  // namespace

void check_config(const GeneratorConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::invalid_config, msg); };
  if (cfg.count < 1) fail("count must be >= 1");
  if (!(cfg.map_size > 0.0)) fail("map_size must be > 0");
  if (cfg.min_segments < 1 || cfg.min_segments > cfg.max_segments) fail("segment count range is empty");
  if (!(cfg.min_segment_length > 0.0) || cfg.min_segment_length > cfg.max_segment_length) {
    fail("segment length range is empty");
  }
  if (!(cfg.kappa_bound >= 0.0)) fail("kappa_bound must be >= 0");
  if (!(cfg.kappa_bound * cfg.min_segment_length < std::numbers::pi)) {
    fail("kappa_bound * min_segment_length must be below pi");
  }
  if (!(cfg.lane_width > 0.0)) fail("lane_width must be > 0");
  if (!(cfg.control_spacing > 0.0)) fail("control_spacing must be > 0");
}

std::string generated_test_id(std::size_t index, std::size_t count) {
  std::size_t width = 4;
  for (std::size_t c = count; c >= 10000; c /= 10) ++width;
  std::string digits = std::to_string(index);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "test_" + digits;
}

std::vector<RoadTest> generate_tests(const GeneratorConfig& cfg) {
  check_config(cfg);
  std::vector<RoadTest> tests;
  tests.reserve(cfg.count);
  const std::size_t budget = 1000 * cfg.count;
  std::size_t rejected = 0;

  for (std::size_t i = 0; i < cfg.count; ++i) {
    Rng rng(derive_seed(cfg.seed, i));
    while (true) {
      const Pose start{rng.uniform(0.0, cfg.map_size), rng.uniform(0.0, cfg.map_size),
                       rng.uniform(0.0, 2.0 * std::numbers::pi)};
      const auto n = static_cast<int>(rng.integer(cfg.min_segments, cfg.max_segments));
      std::vector<Piece> pieces;
      for (int k = 0; k < n; ++k) {
        const double kappa = rng.uniform(-cfg.kappa_bound, cfg.kappa_bound);
        const double length = rng.uniform(cfg.min_segment_length, cfg.max_segment_length);
        pieces.push_back({kappa, length});
      }

      RoadTest test;
      test.test_id = generated_test_id(i, cfg.count);
      test.lane_width = cfg.lane_width;
      test.control_points = render(start, pieces, cfg.control_spacing);
      if (validate(test, cfg.map_size)) {
        tests.push_back(std::move(test));
        rejected = 0;
        break;
      }
      if (++rejected >= budget) {
        throw Error(ErrorKind::generation_exhausted,
                    std::to_string(rejected) + " consecutive candidates rejected");
      }
    }
  }
  return tests;
}

}  // namespace roadsel
