#include "swathcube/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "swathcube/error.hpp"

namespace swathcube {

FovVectors project_fov(double fov_deg) {
  if (!(fov_deg > 0.0 && fov_deg < 180.0))
    throw Error("field of view must be in (0, 180) degrees, got " + std::to_string(fov_deg));
  return {fov_deg, std::tan(fov_deg * std::numbers::pi / 360.0)};
}

GroundPlane ground_plane(const geodesy::LocalFrame& frame, double ground_altitude) {
  return {frame.origin_altitude - ground_altitude};
}

LineFootprint line_endpoints(const Pose& pose, const FovVectors& fov, GroundPlane ground,
                             std::size_t line) {
  const double height = ground.down - pose.position.down;
  if (!(height > 0))
    throw GeometryError("camera is not above the ground at line " + std::to_string(line), line);
  const Eigen::Matrix3d r = pose.orientation.matrix();
  LineFootprint out;
  out.line = line;
  const std::array<Eigen::Vector3d, 2> heads = {fov.first(), fov.last()};
  for (std::size_t k = 0; k < 2; ++k) {
    const Eigen::Vector3d v = r * heads[k];
    if (!(v.z() > kMinRayDown))
      throw GeometryError("line " + std::to_string(line) + " has a ray that does not reach the ground",
                          line);
    const double s = height / v.z();
    out.north[k] = pose.position.north + s * v.x();
    out.east[k] = pose.position.east + s * v.y();
    out.depth[k] = s;
  }
  return out;
}

FootprintMesh build_mesh(const PoseTrack& track, std::size_t samples, const FovVectors& fov,
                         GroundPlane ground, const std::optional<Pose>& next_first) {
  if (track.empty()) throw Error("cannot mesh an empty pose track");
  if (samples == 0) throw Error("cannot mesh a cube without samples");
  FootprintMesh mesh;
  mesh.samples = samples;
  mesh.lines = track.size();
  mesh.chained = next_first.has_value();
  const std::size_t rows = track.size() + (next_first ? 1 : 0);
  mesh.vertices.reserve(2 * rows);
  const auto s_last = static_cast<float>(samples);
  auto push = [&](const LineFootprint& f) {
    mesh.vertices.push_back({f.north[0], f.east[0], f.depth[0], 0.0f});
    mesh.vertices.push_back({f.north[1], f.east[1], f.depth[1], s_last});
  };
  for (std::size_t i = 0; i < track.size(); ++i) push(line_endpoints(track[i], fov, ground, i));
  if (next_first) push(line_endpoints(*next_first, fov, ground, track.size()));
  return mesh;
}

void Bounds::extend(const Bounds& o) {
  min_north = std::min(min_north, o.min_north);
  max_north = std::max(max_north, o.max_north);
  min_east = std::min(min_east, o.min_east);
  max_east = std::max(max_east, o.max_east);
}

Bounds mesh_bounds(const FootprintMesh& mesh) {
  if (mesh.vertices.empty()) throw Error("mesh has no vertices");
  constexpr double inf = std::numeric_limits<double>::infinity();
  Bounds b{inf, -inf, inf, -inf};
  for (const auto& v : mesh.vertices) {
    b.min_north = std::min(b.min_north, v.north);
    b.max_north = std::max(b.max_north, v.north);
    b.min_east = std::min(b.min_east, v.east);
    b.max_east = std::max(b.max_east, v.east);
  }
  return b;
}

Bounds mesh_bounds(std::span<const FootprintMesh> meshes) {
  std::optional<Bounds> out;
  for (const auto& m : meshes) {
    if (m.vertices.empty()) continue;
    const Bounds b = mesh_bounds(m);
    if (out) {
      out->extend(b);
    } else {
      out = b;
    }
  }
  if (!out) throw Error("no mesh vertices to bound");
  return *out;
}

double estimate_ground_height(std::span<const double> camera_altitudes, double nominal_agl,
                              std::optional<double> override_height) {
  if (override_height) return *override_height;
  if (camera_altitudes.empty()) throw Error("cannot estimate ground height without poses");
  return *std::min_element(camera_altitudes.begin(), camera_altitudes.end()) - nominal_agl;
}

}  // namespace swathcube
