#include "oracle/direct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

OracleGrid grid_from(const swathcube::PixelGrid& grid, const swathcube::geodesy::LocalFrame& frame,
                     const FlightPlan& plan) {
  OracleGrid g;
  g.gsd = grid.pixel_east;
  g.width = grid.width;
  g.height = grid.height;
  g.north0 = grid.center_north(0) + 0.5 * grid.pixel_north + (frame.origin.northing - plan.anchor_northing);
  g.east0 = grid.center_east(0) - 0.5 * grid.pixel_east + (frame.origin.easting - plan.anchor_easting);
  return g;
}

std::size_t DirectResult::covered_count() const {
  return static_cast<std::size_t>(std::count_if(line.begin(), line.end(), [](std::int32_t l) { return l >= 0; }));
}

DirectResult direct_georectify(const Trajectory& traj, std::size_t cube, std::span<const float> values,
                               const OracleGrid& grid, int subdivisions) {
  DirectResult r;
  r.width = grid.width;
  r.height = grid.height;
  const std::size_t n = grid.width * grid.height;
  r.value.assign(n, 0.0f);
  r.line.assign(n, -1);
  r.sample.assign(n, -1);
  r.dist2.assign(n, std::numeric_limits<double>::infinity());

  const auto& timing = traj.cubes().at(cube);
  const std::size_t S = traj.plan().camera.samples;
  const double dt = traj.line_interval();
  const int k = std::max(1, subdivisions);
  std::vector<double> tau(k > 1 ? n : 0), u(tau.size());
  for (std::size_t i = 0; i < timing.lines; ++i) {
    for (int a = 0; a < k; ++a) {
      const double t = traj.line_time(cube, i) + (a + 0.5) / k * dt;
      const TruthPose p = traj.at(t);
      for (std::size_t s = 0; s < S; ++s) {
        for (int b = 0; b < k; ++b) {
          const Vec3 v = traj.ray(static_cast<double>(s) + (b + 0.5) / k);
          const Vec3 d = apply(p.r, v);
          if (!(d[2] > 0) || p.ned[2] >= 0) {
            ++r.skipped;
            continue;
          }
          const Vec3 g = intersect_ground(p.ned, p.r, v, 0.0);
          const double fx = (g[1] - grid.east0) / grid.gsd;
          const double fy = (grid.north0 - g[0]) / grid.gsd;
          if (!(fx >= 0) || !(fy >= 0)) continue;
          const auto x = static_cast<std::size_t>(fx);
          const auto y = static_cast<std::size_t>(fy);
          if (x >= grid.width || y >= grid.height) continue;
          const std::size_t idx = y * grid.width + x;
          const double ex = fx - (static_cast<double>(x) + 0.5);
          const double ey = fy - (static_cast<double>(y) + 0.5);
          const double d2 = ex * ex + ey * ey;
          if (k > 1 && d2 >= r.dist2[idx]) continue;
          r.dist2[idx] = d2;
          r.line[idx] = static_cast<std::int32_t>(i);
          r.sample[idx] = static_cast<std::int32_t>(s);
          if (k > 1) {
            tau[idx] = static_cast<double>(i) + (a + 0.5) / k;
            u[idx] = static_cast<double>(s) + (b + 0.5) / k;
          } else if (!values.empty()) {
            r.value[idx] = values[i * S + s];
          }
        }
      }
    }
  }
  if (k == 1) return r;

  // Locate each pixel center in cube coordinates from its nearest sub-ray and
  // the sub-rays one step later in time and one step along the sensor.
  const double t0 = traj.line_time(cube, 0);
  auto land = [&](double tl, double ul) {
    const TruthPose p = traj.at(t0 + tl * dt);
    return intersect_ground(p.ned, p.r, traj.ray(ul), 0.0);
  };
  const double step = 1.0 / k;
  for (std::size_t y = 0; y < grid.height; ++y) {
    for (std::size_t x = 0; x < grid.width; ++x) {
      const std::size_t idx = y * grid.width + x;
      if (r.line[idx] < 0) continue;
      const Vec3 p0 = land(tau[idx], u[idx]);
      const Vec3 p1 = land(tau[idx] + step, u[idx]);
      const Vec3 p2 = land(tau[idx], u[idx] + step);
      const double a11 = p1[0] - p0[0], a21 = p1[1] - p0[1];
      const double a12 = p2[0] - p0[0], a22 = p2[1] - p0[1];
      const double bn = grid.center_north(y) - p0[0], be = grid.center_east(x) - p0[1];
      const double det = a11 * a22 - a12 * a21;
      const double line = tau[idx] + step * (bn * a22 - be * a12) / det;
      const double sample = u[idx] + step * (a11 * be - a21 * bn) / det;
      if (!(line >= 0 && line < static_cast<double>(timing.lines) && sample >= 0 &&
            sample < static_cast<double>(S))) {
        r.line[idx] = -1;
        r.sample[idx] = -1;
        continue;
      }
      r.line[idx] = static_cast<std::int32_t>(line);
      r.sample[idx] = static_cast<std::int32_t>(sample);
      if (!values.empty()) r.value[idx] = values[static_cast<std::size_t>(r.line[idx]) * S + static_cast<std::size_t>(r.sample[idx])];
    }
  }
  return r;
}

namespace {

struct Point {
  double north, east;
};

void fill_even_odd(const std::vector<Point>& poly, const OracleGrid& grid, std::vector<std::uint8_t>& mask) {
  std::vector<double> xs;
  for (std::size_t y = 0; y < grid.height; ++y) {
    const double cy = grid.center_north(y);
    xs.clear();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point& a = poly[i];
      const Point& b = poly[(i + 1) % poly.size()];
      if ((a.north > cy) != (b.north > cy)) {
        const double t = (cy - a.north) / (b.north - a.north);
        xs.push_back(a.east + t * (b.east - a.east));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t j = 0; j + 1 < xs.size(); j += 2) {
      const double x0 = (xs[j] - grid.east0) / grid.gsd - 0.5;
      const double x1 = (xs[j + 1] - grid.east0) / grid.gsd - 0.5;
      const auto c0 = static_cast<std::int64_t>(std::ceil(x0));
      const auto c1 = static_cast<std::int64_t>(std::floor(x1));
      for (std::int64_t x = std::max<std::int64_t>(c0, 0);
           x <= std::min<std::int64_t>(c1, static_cast<std::int64_t>(grid.width) - 1); ++x) {
        mask[y * grid.width + static_cast<std::size_t>(x)] = 1;
      }
    }
  }
}

}  // namespace

std::vector<std::uint8_t> interior_mask(const Trajectory& traj, std::span<const std::size_t> cubes,
                                        const OracleGrid& grid) {
  std::vector<std::uint8_t> mask(grid.width * grid.height, 0);
  const double S = static_cast<double>(traj.plan().camera.samples);
  for (std::size_t c : cubes) {
    const auto& timing = traj.cubes().at(c);
    std::size_t rows = timing.lines;
    if (timing.chained) ++rows;
    std::vector<Point> left, right;
    for (std::size_t i = 0; i < rows; ++i) {
      const double t = traj.line_time(c, i);
      const Vec3 a = traj.ground_point(t, traj.ray(0));
      const Vec3 b = traj.ground_point(t, traj.ray(S));
      left.push_back({a[0], a[1]});
      right.push_back({b[0], b[1]});
    }
    std::vector<Point> poly = left;
    poly.insert(poly.end(), right.rbegin(), right.rend());
    fill_even_odd(poly, grid, mask);
  }
  std::vector<std::uint8_t> eroded(mask.size(), 0);
  for (std::size_t y = 1; y + 1 < grid.height; ++y) {
    for (std::size_t x = 1; x + 1 < grid.width; ++x) {
      bool all = true;
      for (int dy = -1; dy <= 1 && all; ++dy)
        for (int dx = -1; dx <= 1 && all; ++dx)
          all = mask[(y + dy) * grid.width + (x + dx)] != 0;
      eroded[y * grid.width + x] = all ? 1 : 0;
    }
  }
  return eroded;
}

}  // namespace oracle
