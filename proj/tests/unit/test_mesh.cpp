#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <oracle/rotation.hpp>
#include <swathcube/error.hpp>
#include <swathcube/mesh.hpp>

namespace {

using namespace swathcube;

Pose level_pose(double north, double east, double down, double roll = 0, double pitch = 0, double yaw = 0) {
  return {{north, east, down}, Orientation::from_euler_deg(roll, pitch, yaw)};
}

PoseTrack straight_track(std::size_t lines, double spacing, double down = -40.0) {
  std::vector<geodesy::NedPoint> pos;
  std::vector<Orientation> ori;
  for (std::size_t i = 0; i < lines; ++i) {
    pos.push_back({spacing * static_cast<double>(i), 0.0, down});
    ori.push_back(Orientation{});
  }
  return {pos, ori};
}

double shoelace(const std::vector<std::array<double, 2>>& poly) {
  double a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * std::abs(a);
}

TEST(Fov, HalfAngleTangent) {
  EXPECT_NEAR(project_fov(90).d, 1.0, 1e-15);
  EXPECT_NEAR(project_fov(47.5).d, 0.4400105, 1e-7);  // tan(23.75 deg)
  const auto f = project_fov(60);
  EXPECT_EQ(f.first(), Eigen::Vector3d(0, -f.d, 1));
  EXPECT_EQ(f.last(), Eigen::Vector3d(0, f.d, 1));
  EXPECT_THROW(project_fov(0), Error);
  EXPECT_THROW(project_fov(180), Error);
  EXPECT_THROW(project_fov(NAN), Error);
}

TEST(Endpoints, NadirSwathWidth) {
  const auto fov = project_fov(47.5);
  const auto f = line_endpoints(level_pose(0, 0, -40), fov, {0.0});
  EXPECT_NEAR(f.east[1] - f.east[0], 2 * 40 * fov.d, 1e-12);
  EXPECT_NEAR(f.east[1] - f.east[0], 35.2008, 1e-4);
  EXPECT_NEAR((f.east[1] - f.east[0]) / 900, 0.039, 1e-3);
  EXPECT_NEAR(f.north[0], 0.0, 1e-12);
  EXPECT_NEAR(f.depth[0], 40.0, 1e-12);
  EXPECT_LT(f.east[0], f.east[1]);  // first sample to the left (west) when facing north
}

TEST(Endpoints, RollTenDegreesMatchesOracle) {
  const auto fov = project_fov(47.5);
  const auto f = line_endpoints(level_pose(0, 0, -40, 10), fov, {0.0});
  const auto r = oracle::euler_zyx_matrix(10, 0, 0);
  for (int k = 0; k < 2; ++k) {
    const double side = k == 0 ? -fov.d : fov.d;
    const auto g = oracle::intersect_ground({0, 0, -40}, r, {0, side, 1}, 0.0);
    EXPECT_NEAR(f.north[k], g[0], 1e-9);
    EXPECT_NEAR(f.east[k], g[1], 1e-9);
    EXPECT_NEAR(f.depth[k], g[2], 1e-9);
  }
  // Closed form: the ray at angle a from nadir in the roll plane lands at h * tan(a + roll).
  const double a = std::atan(fov.d);
  const double roll = 10 * M_PI / 180;
  EXPECT_NEAR(f.east[1], 40 * std::tan(a - roll), 1e-9);
  EXPECT_NEAR(f.east[0], -40 * std::tan(a + roll), 1e-9);
}

TEST(Endpoints, RandomPosesMatchOracle) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> ang(-20, 20), yaw(-180, 180), pos(-500, 500), h(10, 300);
  const auto fov = project_fov(47.5);
  for (int i = 0; i < 1000; ++i) {
    const double roll = ang(rng), pitch = ang(rng), y = yaw(rng);
    const double n = pos(rng), e = pos(rng), ground = pos(rng) / 10, down = ground - h(rng);
    const auto f = line_endpoints(level_pose(n, e, down, roll, pitch, y), fov, {ground});
    const auto r = oracle::euler_zyx_matrix(roll, pitch, y);
    for (int k = 0; k < 2; ++k) {
      const auto g = oracle::intersect_ground({n, e, down}, r, {0, k == 0 ? -fov.d : fov.d, 1}, ground);
      EXPECT_NEAR(f.north[k], g[0], 1e-9);
      EXPECT_NEAR(f.east[k], g[1], 1e-9);
    }
  }
}

TEST(Endpoints, DegenerateRaysNameTheLine) {
  const auto fov = project_fov(47.5);
  try {
    line_endpoints(level_pose(0, 0, -40, 80), fov, {0.0}, 17);
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.line(), 17u);
  }
  EXPECT_THROW(line_endpoints(level_pose(0, 0, 5), fov, {0.0}, 1), GeometryError);  // below ground
  EXPECT_THROW(line_endpoints(level_pose(0, 0, -40, 0, 90.0), fov, {0.0}), GeometryError);
}

TEST(Mesh, QuadAndTriangleLayout) {
  const auto fov = project_fov(47.5);
  const auto mesh = build_mesh(straight_track(3, 0.04), 900, fov, {0.0});
  EXPECT_EQ(mesh.rows(), 3u);
  EXPECT_EQ(mesh.quad_count(), 2u);
  EXPECT_EQ(mesh.triangle_count(), 4u);
  EXPECT_FALSE(mesh.chained);
  EXPECT_EQ(mesh.vertices[0].sample, 0.0f);
  EXPECT_EQ(mesh.vertices[1].sample, 900.0f);
  EXPECT_EQ(mesh.triangle(0), (std::array<std::uint32_t, 3>{0, 1, 3}));
  EXPECT_EQ(mesh.triangle(1), (std::array<std::uint32_t, 3>{0, 3, 2}));
  EXPECT_EQ(mesh.triangle(3), (std::array<std::uint32_t, 3>{2, 5, 4}));
  EXPECT_EQ(mesh.triangle_line(3), 1u);

  const auto chained = build_mesh(straight_track(3, 0.04), 900, fov, {0.0}, level_pose(0.12, 0, -40));
  EXPECT_EQ(chained.quad_count(), 3u);
  EXPECT_TRUE(chained.chained);
  EXPECT_EQ(chained.lines, 3u);

  const auto single = build_mesh(straight_track(1, 0.04), 900, fov, {0.0});
  EXPECT_EQ(single.quad_count(), 0u);
  EXPECT_THROW(build_mesh(PoseTrack{}, 900, fov, {0.0}), Error);
}

TEST(Mesh, StraightFlightAreaIsRectangle) {
  const auto fov = project_fov(47.5);
  const std::size_t lines = 101;
  const auto mesh = build_mesh(straight_track(lines, 0.04), 900, fov, {0.0});
  double area = 0;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto tri = mesh.triangle(t);
    std::vector<std::array<double, 2>> poly;
    for (auto i : tri) poly.push_back({mesh.vertices[i].east, mesh.vertices[i].north});
    area += shoelace(poly);
  }
  EXPECT_NEAR(area, 0.04 * 100 * 80 * fov.d, 1e-9);
}

TEST(Mesh, ConsecutiveQuadsShareAnEdge) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> jitter(0, 2);
  std::vector<geodesy::NedPoint> pos;
  std::vector<Orientation> ori;
  for (int i = 0; i < 50; ++i) {
    pos.push_back({0.04 * i, 0.0, -40.0});
    ori.push_back(Orientation::from_euler_deg(jitter(rng), jitter(rng), jitter(rng)));
  }
  const auto mesh = build_mesh(PoseTrack(pos, ori), 900, project_fov(47.5), {0.0});
  // Quad q's far edge is quad q+1's near edge: the very same vertex indices.
  for (std::size_t q = 0; q + 1 < mesh.quad_count(); ++q) {
    const auto far0 = mesh.triangle(2 * q)[2];
    const auto near0 = mesh.triangle(2 * q + 2)[1];
    EXPECT_EQ(far0, near0);
  }
}

TEST(Bounds, EnclosesEveryVertex) {
  const auto fov = project_fov(47.5);
  const auto a = build_mesh(straight_track(10, 1.0), 900, fov, {0.0});
  const auto b = build_mesh(straight_track(10, -1.0), 900, fov, {0.0});
  const std::vector<FootprintMesh> both{a, b, FootprintMesh{}};
  const Bounds u = mesh_bounds(both);
  EXPECT_NEAR(u.min_north, -9.0, 1e-12);
  EXPECT_NEAR(u.max_north, 9.0, 1e-12);
  EXPECT_NEAR(u.width(), 80 * fov.d, 1e-12);
  EXPECT_THROW(mesh_bounds(std::vector<FootprintMesh>{FootprintMesh{}}), Error);
}

TEST(Ground, EstimateFromLowestAltitude) {
  const std::vector<double> alts{140, 135, 150};
  EXPECT_EQ(estimate_ground_height(alts), 95.0);
  EXPECT_EQ(estimate_ground_height(alts, 30), 105.0);
  EXPECT_EQ(estimate_ground_height(alts, 40, 12.5), 12.5);
  EXPECT_THROW(estimate_ground_height({}), Error);
  geodesy::LocalFrame frame;
  frame.origin_altitude = 135;
  EXPECT_EQ(ground_plane(frame, 95).down, 40.0);
}

}  // namespace
