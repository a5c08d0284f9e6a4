#include "swathcube/pose.hpp"

#include <algorithm>
#include <string>

#include "swathcube/error.hpp"

namespace swathcube {

using geodesy::GeodeticPoint;
using geodesy::LocalFrame;
using geodesy::NedPoint;

PoseTrack::PoseTrack(std::vector<NedPoint> positions, std::vector<Orientation> orientations)
    : positions_(std::move(positions)), orientations_(std::move(orientations)) {
  if (positions_.size() != orientations_.size())
    throw Error("pose track position and orientation counts differ");
}

namespace {

void check_sorted(std::span<const InsRecord> records) {
  if (records.empty()) throw Error("pose log is empty");
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (!(records[i].timestamp > records[i - 1].timestamp))
      throw Error("pose records are not strictly increasing at index " + std::to_string(i));
  }
}

NedPoint lerp(const NedPoint& a, const NedPoint& b, double t) {
  return {a.north + t * (b.north - a.north), a.east + t * (b.east - a.east),
          a.down + t * (b.down - a.down)};
}

}  // namespace

LocalFrame make_local_frame(std::span<const InsRecord> records, double first_line_time,
                            double reference_altitude) {
  check_sorted(records);
  std::vector<GeodeticPoint> track;
  track.reserve(records.size());
  for (const auto& r : records) track.push_back(r.position);
  const auto sel = geodesy::select_zone(track);

  auto it = std::upper_bound(records.begin(), records.end(), first_line_time,
                             [](double t, const InsRecord& r) { return t < r.timestamp; });
  std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - records.begin()), 1,
                                           records.size() - 1);
  if (records.size() == 1) hi = 0;
  const std::size_t lo = hi == 0 ? 0 : hi - 1;
  const auto ua = geodesy::wgs84_to_utm(records[lo].position, sel.zone);
  const auto ub = geodesy::wgs84_to_utm(records[hi].position, sel.zone);
  double t = 0;
  if (hi != lo) {
    t = (first_line_time - records[lo].timestamp) / (records[hi].timestamp - records[lo].timestamp);
    t = std::clamp(t, 0.0, 1.0);
  }

  LocalFrame frame;
  frame.origin.zone = sel.zone;
  frame.origin.hemisphere = sel.hemisphere;
  frame.origin.easting = ua.easting + t * (ub.easting - ua.easting);
  frame.origin.northing = ua.northing + t * (ub.northing - ua.northing);
  if (ua.hemisphere != sel.hemisphere) {
    frame.origin.northing += sel.hemisphere == geodesy::Hemisphere::south
                                 ? geodesy::kUtmFalseNorthingSouth
                                 : -geodesy::kUtmFalseNorthingSouth;
  }
  frame.origin_altitude = reference_altitude;
  const auto origin_geo = geodesy::utm_to_wgs84(frame.origin);
  frame.convergence_deg = geodesy::grid_convergence(origin_geo, sel.zone);
  return frame;
}

std::vector<NavSample> to_local(std::span<const InsRecord> records, const LocalFrame& frame) {
  check_sorted(records);
  const Orientation heading_offset = Orientation::yaw_deg(-frame.convergence_deg);
  std::vector<NavSample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back({r.timestamp, frame.to_ned(r.position),
                   heading_offset * Orientation::from_euler_deg(r.roll, r.pitch, r.yaw)});
  }
  return out;
}

Pose interpolate(const Pose& a, const Pose& b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  return {lerp(a.position, b.position, t), slerp(a.orientation, b.orientation, t)};
}

PoseTrack interpolate_poses(std::span<const NavSample> samples, std::span<const double> line_times,
                            std::string_view cube_name) {
  if (samples.empty()) throw Error("no navigation samples");
  std::vector<NedPoint> positions;
  std::vector<Orientation> orientations;
  positions.reserve(line_times.size());
  orientations.reserve(line_times.size());
  const double first = samples.front().timestamp;
  const double last = samples.back().timestamp;
  for (std::size_t line = 0; line < line_times.size(); ++line) {
    const double t = line_times[line];
    if (!(t >= first && t <= last)) {
      throw PoseRangeError("cube " + std::string(cube_name) + " line " + std::to_string(line) +
                               ": time " + std::to_string(t) + " outside pose log span [" +
                               std::to_string(first) + ", " + std::to_string(last) + "]",
                           std::string(cube_name), line);
    }
    // First sample strictly after t; the bracket is [hi - 1, hi].
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double v, const NavSample& s) { return v < s.timestamp; });
    std::size_t hi = static_cast<std::size_t>(it - samples.begin());
    if (hi == samples.size()) hi = samples.size() - 1;
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    const NavSample& a = samples[lo];
    const NavSample& b = samples[hi];
    Pose p;
    if (a.timestamp == t || lo == hi) {
      p = {a.position, a.orientation};
    } else if (b.timestamp == t) {
      p = {b.position, b.orientation};
    } else {
      const double frac = (t - a.timestamp) / (b.timestamp - a.timestamp);
      p = interpolate({a.position, a.orientation}, {b.position, b.orientation}, frac);
    }
    positions.push_back(p.position);
    orientations.push_back(p.orientation);
  }
  return PoseTrack(std::move(positions), std::move(orientations));
}

PoseTrack interpolate_poses(std::span<const InsRecord> records, std::span<const double> line_times,
                            const LocalFrame& frame, std::string_view cube_name) {
  const auto samples = to_local(records, frame);
  return interpolate_poses(samples, line_times, cube_name);
}

}  // namespace swathcube
