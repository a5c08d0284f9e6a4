#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <oracle/capture.hpp>
#include <oracle/direct.hpp>
#include <oracle/flight.hpp>
#include <oracle/rotation.hpp>
#include <swathcube/collection.hpp>
#include <swathcube/raster.hpp>

#include "unit/fixture.hpp"

namespace {

using namespace oracle;

TEST(OracleRotation, QuaternionRoundTrip) {
  const auto m = euler_zyx_matrix(12, -7, 130);
  const auto back = quaternion_to_matrix(matrix_to_quaternion(m));
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(back[i], m[i], 1e-12);
  EXPECT_NEAR(angle_between(m, back), 0.0, 1e-6);
  EXPECT_NEAR(angle_between(euler_zyx_matrix(0, 0, 0), euler_zyx_matrix(0, 0, 30)), 30.0, 1e-9);
  const auto half = axis_angle_slerp(euler_zyx_matrix(0, 0, 0), euler_zyx_matrix(0, 0, 30), 0.5);
  EXPECT_NEAR(angle_between(half, euler_zyx_matrix(0, 0, 15)), 0.0, 1e-6);
}

TEST(OracleFlight, JitterIsBoundedAndReproducible) {
  const Jitter a(0, 60, 5.0, 0.3, 7);
  const Jitter b(0, 60, 5.0, 0.3, 7);
  const Jitter c(0, 60, 5.0, 0.3, 8);
  double sum2 = 0, max_abs = 0, diff = 0;
  int n = 0;
  for (double t = 0; t < 60; t += 0.01, ++n) {
    EXPECT_EQ(a(t), b(t));
    diff += std::abs(a(t) - c(t));
    sum2 += a(t) * a(t);
    max_abs = std::max(max_abs, std::abs(a(t)));
  }
  EXPECT_LE(max_abs, 5.0);
  EXPECT_GT(std::sqrt(sum2 / n), 1.0);  // not degenerate
  EXPECT_GT(diff, 0.0);
  EXPECT_EQ(Jitter(0, 10, 0.0, 0.3, 1)(5.0), 0.0);
}

TEST(OracleFlight, StraightLegGeometry) {
  FlightPlan plan;
  plan.legs.push_back({0, 0, 90, 2, 100});
  const Trajectory traj(plan);
  ASSERT_EQ(traj.cubes().size(), 2u);
  EXPECT_TRUE(traj.cubes()[0].chained);
  EXPECT_NEAR(traj.line_time(1, 0) - traj.line_time(0, 99), traj.line_interval(), 1e-9);
  const auto p0 = traj.at(traj.line_time(0, 0));
  const auto p1 = traj.at(traj.line_time(0, 0) + 1.0);
  EXPECT_NEAR(p1.ned[1] - p0.ned[1], 10.0, 1e-9);  // heading 90: east at 10 m/s
  EXPECT_NEAR(p1.ned[0] - p0.ned[0], 0.0, 1e-9);
  EXPECT_NEAR(p0.ned[2], -40.0, 1e-12);
  EXPECT_NEAR(traj.nominal_gsd(), 2 * 40 * std::tan(47.5 * M_PI / 360) / 900, 1e-12);
}

TEST(OracleCapture, ConstantSceneGivesConstantCube) {
  auto plan = testing_support::small_plan();
  const Trajectory traj(plan);
  CaptureOptions o;
  o.scene = Scene::constant(321);
  const auto pattern = simulate_pattern(traj, o.scene, 0);
  const auto band = simulate_band(traj, o, 0, 1, pattern);
  for (float v : band) EXPECT_EQ(v, static_cast<float>(321 * o.scene.band_gain(1) + o.scene.band_offset(1)));
}

TEST(OracleCapture, InsCarriesTrueNorthYaw) {
  auto plan = testing_support::small_plan(0.0);
  const Trajectory traj(plan);
  const auto ins = simulate_ins(traj);
  ASSERT_GT(ins.size(), 10u);
  EXPECT_NEAR(ins[1].timestamp - ins[0].timestamp, 1.0 / 200, 1e-12);
  // Grid heading 0 is logged against true north: yaw = grid convergence.
  const double gamma = swathcube::geodesy::grid_convergence(ins[0].position, 16);
  EXPECT_NEAR(ins[0].yaw, gamma, 1e-12);
  EXPECT_NEAR(ins[0].position.altitude, 135.0, 1e-9);
}

TEST(OracleDirect, NadirHoverMatchesInverseRender) {
  // Level flight, no noise: direct 1x with a coarse grid matches the renderer
  // wherever both cover a pixel.
  auto plan = testing_support::small_plan(0.0);
  testing_support::Flight f(plan);
  swathcube::Collection c(f.collection_options());
  const auto grid = swathcube::PixelGrid::covering(c.meshes()->bounds(0, 0), 0.5);
  const swathcube::FootprintMesh* layers[] = {&c.meshes()->meshes[0]};
  const auto plan_r = swathcube::build_plan(layers, grid);
  const auto og = grid_from(grid, c.frame(), plan);
  const auto direct = direct_georectify(f.traj, 0, {}, og, 4);
  std::size_t both = 0, agree = 0;
  for (std::size_t y = 0; y < grid.height; ++y)
    for (std::size_t x = 0; x < grid.width; ++x) {
      const auto& e = plan_r.at(x, y);
      if (e.layer < 0 || !direct.covered(x, y)) continue;
      ++both;
      const auto i = y * grid.width + x;
      agree += std::abs(static_cast<int>(e.sample) - direct.sample[i]) <= 1 &&
               std::abs(static_cast<int>(e.line) - direct.line[i]) <= 1;
    }
  EXPECT_GT(both, 100u);
  EXPECT_EQ(agree, both);
}

/// Latest time in [t0, t1] at which the sensor plane passes through the
/// ground point, and the sensor coordinate it images at.
bool sweep_time(const Trajectory& traj, double north, double east, double t0, double t1, double& t, double& u) {
  auto across = [&](double tt, double* uu) {
    const TruthPose p = traj.at(tt);
    const Vec3 w = {north - p.ned[0], east - p.ned[1], -p.ned[2]};
    Vec3 q{};
    for (int c = 0; c < 3; ++c) q[c] = p.r[c] * w[0] + p.r[3 + c] * w[1] + p.r[6 + c] * w[2];
    if (uu != nullptr) {
      const double d = std::tan(traj.plan().camera.fov_deg * std::numbers::pi / 360);
      *uu = static_cast<double>(traj.plan().camera.samples) * (q[1] / q[2] / d + 1) / 2;
    }
    return q[0];
  };
  const double step = 2e-4;
  bool found = false;
  double fa = across(t0, nullptr);
  for (double a = t0; a < t1; a += step) {
    const double fb = across(a + step, nullptr);
    if ((fa <= 0) != (fb <= 0)) {
      double lo = a, hi = a + step, flo = fa;
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi), fm = across(mid, nullptr);
        if ((fm <= 0) == (flo <= 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      t = 0.5 * (lo + hi);
      across(t, &u);
      found = true;
    }
    fa = fb;
  }
  return found;
}

TEST(OracleDirect, SupersampledFindsTheImagingCell) {
  // Under strong jitter, the 4 x 4 oracle's cell for a pixel is the one whose
  // line interval and sensor slice actually imaged the pixel center.
  auto plan = testing_support::small_plan(4.0);
  plan.camera.samples = 300;
  plan.agl = 15;
  const Trajectory traj(plan);
  const OracleGrid g{12.0, -8.0, 0.04, 400, 300};
  const auto direct = direct_georectify(traj, 0, {}, g, 4);
  const double dt = traj.line_interval();
  std::size_t checked = 0, agree = 0;
  for (std::size_t y = 0; y < g.height; y += 3)
    for (std::size_t x = 0; x < g.width; x += 3) {
      if (!direct.covered(x, y)) continue;
      const std::size_t i = y * g.width + x;
      const double guess = traj.line_time(0, static_cast<std::size_t>(direct.line[i]));
      double t = 0, u = 0;
      if (!sweep_time(traj, g.center_north(y), g.center_east(x), guess - 4 * dt, guess + 5 * dt, t, u)) continue;
      ++checked;
      agree += static_cast<std::int32_t>(std::floor((t - traj.line_time(0, 0)) / dt)) == direct.line[i] &&
               static_cast<std::int32_t>(std::floor(u)) == direct.sample[i];
    }
  ASSERT_GT(checked, 1000u);
  EXPECT_GT(static_cast<double>(agree) / static_cast<double>(checked), 0.999);
}

TEST(OracleDirect, InteriorMaskInsideFootprint) {
  auto plan = testing_support::small_plan(0.0);
  const Trajectory traj(plan);
  OracleGrid g{20.0, -20.0, 0.5, 80, 60};
  const std::size_t cubes[] = {0, 1};
  const auto mask = interior_mask(traj, cubes, g);
  std::size_t inside = 0;
  for (auto m : mask) inside += m;
  // Two cubes of 120 lines at ~4 cm cover ~9.6 m by ~35 m.
  EXPECT_GT(inside, 9 * 33 * 4 * 0.8);
  EXPECT_LT(inside, 10 * 36 * 4);
}

}  // namespace
