#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace swathcube {

/// Unit quaternion rotating camera-frame vectors into NED. The identity is a
/// camera aimed at nadir with the top of the capture line pointing north;
/// camera axes are (forward, right, down) = (N, E, D) at identity.
///
/// Stored canonically with w >= 0 so equal rotations serialize identically.
class Orientation {
 public:
  Orientation() = default;

  /// Normalizes; throws std::invalid_argument for a zero or non-finite input.
  static Orientation from_wxyz(double w, double x, double y, double z);

  /// Aerospace ZYX Euler angles in degrees: yaw about down, then pitch, then
  /// roll.
  static Orientation from_euler_deg(double roll, double pitch, double yaw);

  static Orientation yaw_deg(double yaw);

  double w() const noexcept { return q_.w(); }
  double x() const noexcept { return q_.x(); }
  double y() const noexcept { return q_.y(); }
  double z() const noexcept { return q_.z(); }

  const Eigen::Quaterniond& quaternion() const noexcept { return q_; }
  Eigen::Matrix3d matrix() const { return q_.toRotationMatrix(); }
  Eigen::Vector3d rotate(const Eigen::Vector3d& v) const { return q_ * v; }

  /// Roll, pitch, yaw in degrees (ZYX).
  Eigen::Vector3d euler_deg() const;

  /// (a * b) applies b first, then a.
  Orientation operator*(const Orientation& other) const;
  Orientation inverse() const;

  /// Rotation angle in radians between the two orientations.
  double angle_to(const Orientation& other) const;

  friend bool operator==(const Orientation& a, const Orientation& b) {
    return a.q_.coeffs() == b.q_.coeffs();
  }

 private:
  explicit Orientation(const Eigen::Quaterniond& q);
  void canonicalize();

  Eigen::Quaterniond q_{1.0, 0.0, 0.0, 0.0};
};

/// Shortest-arc spherical interpolation with constant angular velocity.
/// t = 0 and t = 1 return the endpoints exactly; nearly equal inputs
/// (|dot| > 1 - 1e-8) fall back to normalized linear interpolation.
Orientation slerp(const Orientation& a, const Orientation& b, double t);

}  // namespace swathcube
