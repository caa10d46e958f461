#include "roadsel/road.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "roadsel/error.hpp"

namespace roadsel {

namespace {

constexpr double kMinPointGap = 1e-9;
// Dense spline sampling used before arc-length resampling.
constexpr double kDenseSpacing = 0.05;

double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

/// Second derivatives of a natural cubic spline through (t, y).
Eigen::VectorXd natural_spline_moments(const Eigen::VectorXd& t, const Eigen::VectorXd& y) {
  const Eigen::Index n = t.size();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  if (n < 3) return m;

  // Tridiagonal system for the interior moments, solved by the Thomas algorithm.
  const Eigen::Index k = n - 2;
  Eigen::VectorXd sub(k), diag(k), sup(k), rhs(k);
  for (Eigen::Index i = 1; i <= k; ++i) {
    const double h0 = t[i] - t[i - 1];
    const double h1 = t[i + 1] - t[i];
    sub[i - 1] = h0;
    diag[i - 1] = 2.0 * (h0 + h1);
    sup[i - 1] = h1;
    rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
  }
  for (Eigen::Index i = 1; i < k; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m[k] = rhs[k - 1] / diag[k - 1];
  for (Eigen::Index i = k - 1; i >= 1; --i) {
    m[i] = (rhs[i - 1] - sup[i - 1] * m[i + 1]) / diag[i - 1];
  }
  return m;
}

double spline_eval(double h, double u, double y0, double y1, double m0, double m1) {
  // u is the offset from the left knot, h the interval width.
  const double a = (h - u) / h;
  const double b = u / h;
  return a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
}

Polyline dense_spline(std::span<const Point3> pts) {
  const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
  Eigen::VectorXd t(n);
  t[0] = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) t[i] = t[i - 1] + (pts[i] - pts[i - 1]).norm();

  Eigen::Matrix<double, Eigen::Dynamic, 3> coords(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) coords.row(i) = pts[i].transpose();
  Eigen::Matrix<double, Eigen::Dynamic, 3> moments(n, 3);
  for (int c = 0; c < 3; ++c) moments.col(c) = natural_spline_moments(t, coords.col(c));

  Polyline dense;
  dense.push_back(pts[0]);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = t[i + 1] - t[i];
    const int pieces = std::max(4, static_cast<int>(std::ceil(h / kDenseSpacing)));
    for (int j = 1; j <= pieces; ++j) {
      if (j == pieces) {
        dense.push_back(pts[i + 1]);
        continue;
      }
      const double u = h * j / pieces;
      Point3 p;
      for (int c = 0; c < 3; ++c) {
        p[c] = spline_eval(h, u, coords(i, c), coords(i + 1, c), moments(i, c), moments(i + 1, c));
      }
      dense.push_back(p);
    }
  }
  return dense;
}

std::vector<double> edge_lengths(std::span<const Point3> path) {
  std::vector<double> ds(path.size() > 0 ? path.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) ds[i] = (path[i + 1] - path[i]).norm();
  return ds;
}

}  // namespace

const char* to_string(Label label) {
  switch (label) {
    case Label::unlabeled: return "unlabeled";
    case Label::safe: return "safe";
    case Label::unsafe: return "unsafe";
  }
  return "unlabeled";
}

const char* to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::straight: return "straight";
    case SegmentKind::left_turn: return "left_turn";
    case SegmentKind::right_turn: return "right_turn";
  }
  return "straight";
}

const char* to_string(ValidityRule rule) {
  switch (rule) {
    case ValidityRule::ok: return "ok";
    case ValidityRule::malformed: return "malformed";
    case ValidityRule::out_of_bounds: return "out-of-bounds";
    case ValidityRule::radius_too_small: return "radius-too-small";
    case ValidityRule::self_intersection: return "self-intersection";
  }
  return "ok";
}

double arc_length(std::span<const Point3> path) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) total += (path[i + 1] - path[i]).norm();
  return total;
}

void check_road(const RoadTest& test) {
  const auto& pts = test.control_points;
  if (pts.size() < 2) {
    throw Error(ErrorKind::invalid_road,
                "road '" + test.test_id + "' needs at least 2 control points");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].allFinite()) {
      throw Error(ErrorKind::invalid_road,
                  "road '" + test.test_id + "' has a non-finite control point");
    }
    if (i > 0 && (pts[i] - pts[i - 1]).norm() <= kMinPointGap) {
      throw Error(ErrorKind::invalid_road, "road '" + test.test_id +
                                               "' has repeated consecutive control points at index " +
                                               std::to_string(i));
    }
  }
  if (!(test.lane_width > 0.0) || !std::isfinite(test.lane_width)) {
    throw Error(ErrorKind::invalid_road, "road '" + test.test_id + "' has lane_width <= 0");
  }
}

Polyline interpolate(std::span<const Point3> control_points, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::invalid_config, "interpolation step must be > 0");
  if (control_points.size() < 2) {
    throw Error(ErrorKind::invalid_road, "interpolation needs at least 2 distinct points");
  }
  for (std::size_t i = 1; i < control_points.size(); ++i) {
    if ((control_points[i] - control_points[i - 1]).norm() <= kMinPointGap) {
      throw Error(ErrorKind::invalid_road, "interpolation got repeated consecutive points");
    }
  }

  const Polyline dense = dense_spline(control_points);
  const std::vector<double> ds = edge_lengths(dense);
  double total = 0.0;
  for (double d : ds) total += d;

  Polyline out;
  out.push_back(control_points.front());
  const auto full_steps = static_cast<std::size_t>(std::floor(total / step + 1e-9));
  std::size_t edge = 0;
  double edge_start = 0.0;
  for (std::size_t k = 1; k <= full_steps; ++k) {
    const double target = std::min(static_cast<double>(k) * step, total);
    while (edge + 1 < ds.size() && edge_start + ds[edge] < target) {
      edge_start += ds[edge];
      ++edge;
    }
    const double u = ds[edge] > 0.0 ? std::clamp((target - edge_start) / ds[edge], 0.0, 1.0) : 0.0;
    out.push_back(dense[edge] + u * (dense[edge + 1] - dense[edge]));
  }
  if (total - static_cast<double>(full_steps) * step > 1e-6) {
    out.push_back(control_points.back());
  } else {
    out.back() = control_points.back();
  }
  return out;
}

Polyline interpolate(const RoadTest& test, double step) {
  check_road(test);
  return interpolate(std::span<const Point3>(test.control_points), step);
}

std::vector<double> edge_curvature(std::span<const Point3> path) {
  const std::size_t n = path.size();
  if (n < 2) return {};
  const std::vector<double> ds = edge_lengths(path);
  std::vector<double> heading(n - 1);
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const Eigen::Vector2d d = (path[e + 1] - path[e]).head<2>();
    if (d.norm() > kMinPointGap) {
      heading[e] = std::atan2(d.y(), d.x());
    } else {
      heading[e] = e > 0 ? heading[e - 1] : 0.0;
    }
  }
  if (n == 2) return {0.0};

  std::vector<double> vertex(n, 0.0);
  for (std::size_t v = 1; v + 1 < n; ++v) {
    const double mean_ds = 0.5 * (ds[v - 1] + ds[v]);
    vertex[v] = mean_ds > 0.0 ? wrap_angle(heading[v] - heading[v - 1]) / mean_ds : 0.0;
  }
  vertex[0] = vertex[1];
  vertex[n - 1] = vertex[n - 2];

  std::vector<double> edge(n - 1);
  for (std::size_t e = 0; e + 1 < n; ++e) edge[e] = 0.5 * (vertex[e] + vertex[e + 1]);
  return edge;
}

std::vector<double> point_curvature(std::span<const Point3> path) {
  const std::vector<double> edge = edge_curvature(path);
  std::vector<double> point(path.size(), 0.0);
  if (edge.empty()) return point;
  point.front() = edge.front();
  point.back() = edge.back();
  for (std::size_t i = 1; i + 1 < path.size(); ++i) point[i] = 0.5 * (edge[i - 1] + edge[i]);
  return point;
}

SegmentedRoad segmentize(Polyline path, const SegmentationOptions& options) {
  if (path.size() < 2) throw Error(ErrorKind::invalid_road, "segmentize needs at least 2 points");
  const std::vector<double> ds = edge_lengths(path);
  const std::vector<double> kappa = edge_curvature(path);
  const double threshold =
      options.angle_threshold * std::numbers::pi / 180.0 / options.reference_length;

  auto classify = [&](double k) {
    if (std::abs(k) < threshold) return SegmentKind::straight;
    return k > 0.0 ? SegmentKind::left_turn : SegmentKind::right_turn;
  };

  SegmentedRoad road;
  const std::size_t edges = ds.size();
  std::size_t start = 0;
  while (start < edges) {
    const SegmentKind kind = classify(kappa[start]);
    std::size_t stop = start + 1;
    while (stop < edges && classify(kappa[stop]) == kind) ++stop;

    Segment seg;
    seg.kind = kind;
    seg.begin = start;
    seg.end = stop;
    double turn = 0.0;
    for (std::size_t e = start; e < stop; ++e) {
      seg.length += ds[e];
      turn += kappa[e] * ds[e];
    }
    if (kind != SegmentKind::straight) {
      seg.turn_angle = std::abs(turn) * 180.0 / std::numbers::pi;
      seg.pivot_radius = seg.length / std::abs(turn);
    }
    road.segments.push_back(seg);
    start = stop;
  }
  road.segments.back().end = path.size();
  road.path = std::move(path);
  return road;
}

Verdict validate(const RoadTest& test, std::optional<double> map_size) {
  try {
    check_road(test);
  } catch (const Error& e) {
    return {ValidityRule::malformed, e.what()};
  }

  const Polyline path = interpolate(std::span<const Point3>(test.control_points), 1.0);

  if (map_size) {
    for (const Point3& p : path) {
      if (p.x() < 0.0 || p.y() < 0.0 || p.x() > *map_size || p.y() > *map_size) {
        std::ostringstream os;
        os << "point (" << p.x() << ", " << p.y() << ") outside [0, " << *map_size << "]^2";
        return {ValidityRule::out_of_bounds, os.str()};
      }
    }
  }

  const double min_radius = 2.0 * test.lane_width;
  const SegmentedRoad road = segmentize(path);
  for (const Segment& seg : road.segments) {
    if (seg.pivot_radius && *seg.pivot_radius < min_radius) {
      std::ostringstream os;
      os << "turn radius " << *seg.pivot_radius << " m below " << min_radius << " m";
      return {ValidityRule::radius_too_small, os.str()};
    }
  }

  // The road body extends lane_width to each side of the spine. Two spine
  // points far apart along the road must stay at least one road width apart;
  // a crossing spine is caught the same way since sampling is 1 m.
  const double road_width = 2.0 * test.lane_width;
  const double min_separation = std::numbers::pi * test.lane_width;
  std::vector<double> s(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) s[i] = s[i - 1] + (path[i] - path[i - 1]).norm();

  auto cell_of = [&](const Point3& p) {
    return std::pair<long long, long long>{static_cast<long long>(std::floor(p.x() / road_width)),
                                           static_cast<long long>(std::floor(p.y() / road_width))};
  };
  auto key_of = [](long long cx, long long cy) {
    return static_cast<std::uint64_t>(cx) * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(cy);
  };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto [cx, cy] = cell_of(path[i]);
    grid[key_of(cx, cy)].push_back(i);
  }
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto [cx, cy] = cell_of(path[i]);
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = grid.find(key_of(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        for (std::size_t j : it->second) {
          if (j <= i || s[j] - s[i] <= min_separation) continue;
          const double d = (path[j] - path[i]).head<2>().norm();
          if (d < road_width) {
            std::ostringstream os;
            os << "road overlaps itself near arc positions " << s[i] << " m and " << s[j] << " m";
            return {ValidityRule::self_intersection, os.str()};
          }
        }
      }
    }
  }
  return {};
}

}  // namespace roadsel
