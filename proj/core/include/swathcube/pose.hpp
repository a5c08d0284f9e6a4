#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "swathcube/geodesy.hpp"
#include "swathcube/orientation.hpp"

namespace swathcube {

/// One INS sample: true-north referenced attitude in degrees.
struct InsRecord {
  double timestamp = 0;  // seconds, monotonic epoch
  geodesy::GeodeticPoint position;
  double roll = 0;
  double pitch = 0;
  double yaw = 0;
};

struct Pose {
  geodesy::NedPoint position;
  Orientation orientation;
};

/// Per-line camera poses of one cube, aligned to the start of each exposure.
class PoseTrack {
 public:
  PoseTrack() = default;
  PoseTrack(std::vector<geodesy::NedPoint> positions, std::vector<Orientation> orientations);

  std::size_t size() const noexcept { return positions_.size(); }
  bool empty() const noexcept { return positions_.empty(); }
  Pose operator[](std::size_t line) const { return {positions_[line], orientations_[line]}; }
  const std::vector<geodesy::NedPoint>& positions() const noexcept { return positions_; }
  const std::vector<Orientation>& orientations() const noexcept { return orientations_; }

 private:
  std::vector<geodesy::NedPoint> positions_;
  std::vector<Orientation> orientations_;
};

/// An INS record expressed in the collection frame, attitude already rotated
/// from true north to grid north.
struct NavSample {
  double timestamp = 0;
  geodesy::NedPoint position;
  Orientation orientation;
};

/// Builds the collection frame: zone from the record centroid, origin at the
/// camera position at `first_line_time`, altitude reference as given, and the
/// grid convergence evaluated once at the origin.
geodesy::LocalFrame make_local_frame(std::span<const InsRecord> records, double first_line_time,
                                     double reference_altitude);

/// Projects records into the frame and applies the heading offset
/// (yaw by minus the origin convergence) to every attitude.
std::vector<NavSample> to_local(std::span<const InsRecord> records,
                                const geodesy::LocalFrame& frame);

/// Linear position / slerp orientation interpolation at each line time.
/// Line times outside the sample span raise PoseRangeError naming the cube
/// and the line.
PoseTrack interpolate_poses(std::span<const NavSample> samples, std::span<const double> line_times,
                            std::string_view cube_name);

PoseTrack interpolate_poses(std::span<const InsRecord> records, std::span<const double> line_times,
                            const geodesy::LocalFrame& frame, std::string_view cube_name);

/// Pose at fraction t between a and b (position lerp, orientation slerp).
Pose interpolate(const Pose& a, const Pose& b, double t);

}  // namespace swathcube
