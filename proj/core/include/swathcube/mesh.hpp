#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "swathcube/pose.hpp"

namespace swathcube {

/// Camera-frame vectors to the two ends of the capture line, heads at
/// (0, -d, 1) and (0, +d, 1).
struct FovVectors {
  double fov_deg = 0;
  double d = 0;

  Eigen::Vector3d first() const { return {0.0, -d, 1.0}; }
  Eigen::Vector3d last() const { return {0.0, d, 1.0}; }
};

/// d = tan(fov / 2). Throws Error unless 0 < fov < 180.
FovVectors project_fov(double fov_deg);

/// Flat ground at a fixed altitude, expressed as a down coordinate in the
/// collection frame.
struct GroundPlane {
  double down = 0;
};

GroundPlane ground_plane(const geodesy::LocalFrame& frame, double ground_altitude);

/// Rays whose down component after rotation is at or below this are rejected.
inline constexpr double kMinRayDown = 1e-6;

struct LineFootprint {
  std::array<double, 2> north{};
  std::array<double, 2> east{};
  std::array<double, 2> depth{};  // ray extension factor, > 0
  std::size_t line = 0;
};

/// Intersects both line-end rays with the ground. Throws GeometryError
/// naming `line` for rays that do not descend or a camera below ground.
LineFootprint line_endpoints(const Pose& pose, const FovVectors& fov, GroundPlane ground,
                             std::size_t line = 0);

struct MeshVertex {
  double north = 0;
  double east = 0;
  double depth = 0;
  float sample = 0;  // 0 at the first endpoint, S at the last
};

/// Vertex rows 2r (sample 0) and 2r + 1 (sample S) for r = 0..rows-1. Quad q
/// joins rows q and q + 1, carries line index q, and is split along the
/// diagonal from (q, 0) to (q + 1, S).
struct FootprintMesh {
  std::size_t samples = 0;
  std::size_t lines = 0;
  bool chained = false;
  std::vector<MeshVertex> vertices;

  std::size_t rows() const noexcept { return vertices.size() / 2; }
  std::size_t quad_count() const noexcept { return rows() < 2 ? 0 : rows() - 1; }
  std::size_t triangle_count() const noexcept { return 2 * quad_count(); }

  /// Vertex indices of triangle t (two per quad), positive orientation not
  /// guaranteed.
  std::array<std::uint32_t, 3> triangle(std::size_t t) const {
    const auto a = static_cast<std::uint32_t>(2 * (t / 2));
    if (t % 2 == 0) return {a, a + 1, a + 3};
    return {a, a + 3, a + 2};
  }
  std::uint32_t triangle_line(std::size_t t) const { return static_cast<std::uint32_t>(t / 2); }
};

/// One quad per pair of consecutive lines; when `next_first` is given a final
/// quad joins the last line to it, otherwise the last line covers no area.
FootprintMesh build_mesh(const PoseTrack& track, std::size_t samples, const FovVectors& fov,
                         GroundPlane ground, const std::optional<Pose>& next_first = std::nullopt);

struct Bounds {
  double min_north = 0;
  double max_north = 0;
  double min_east = 0;
  double max_east = 0;

  double height() const noexcept { return max_north - min_north; }
  double width() const noexcept { return max_east - min_east; }
  void extend(const Bounds& other);
};

Bounds mesh_bounds(const FootprintMesh& mesh);
/// Union over all meshes; empty meshes are skipped. Throws if none has
/// vertices.
Bounds mesh_bounds(std::span<const FootprintMesh> meshes);

inline constexpr double kDefaultNominalAgl = 40.0;

/// Minimum camera altitude minus the nominal flying height above ground, or
/// the override when given.
double estimate_ground_height(std::span<const double> camera_altitudes,
                              double nominal_agl = kDefaultNominalAgl,
                              std::optional<double> override_height = std::nullopt);

}  // namespace swathcube
