#include "swathcube/orientation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swathcube {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kNlerpThreshold = 1e-8;
}  // namespace

Orientation::Orientation(const Eigen::Quaterniond& q) : q_(q) { canonicalize(); }

void Orientation::canonicalize() {
  q_.normalize();
  const auto& c = q_.coeffs();  // x, y, z, w
  bool flip = c.w() < 0;
  if (c.w() == 0) {
    // Pure 180-degree rotations: make the first nonzero vector component positive.
    for (int i = 0; i < 3; ++i) {
      if (c[i] != 0) {
        flip = c[i] < 0;
        break;
      }
    }
  }
  if (flip) q_.coeffs() = -q_.coeffs();
}

Orientation Orientation::from_wxyz(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || n == 0.0) throw std::invalid_argument("quaternion has zero or non-finite norm");
  return Orientation(Eigen::Quaterniond(w, x, y, z));
}

Orientation Orientation::from_euler_deg(double roll, double pitch, double yaw) {
  const Eigen::Quaterniond q = Eigen::AngleAxisd(yaw * kDeg, Eigen::Vector3d::UnitZ()) *
                               Eigen::AngleAxisd(pitch * kDeg, Eigen::Vector3d::UnitY()) *
                               Eigen::AngleAxisd(roll * kDeg, Eigen::Vector3d::UnitX());
  return Orientation(q);
}

Orientation Orientation::yaw_deg(double yaw) { return from_euler_deg(0, 0, yaw); }

Eigen::Vector3d Orientation::euler_deg() const {
  const double w = q_.w(), x = q_.x(), y = q_.y(), z = q_.z();
  const double roll = std::atan2(2 * (w * x + y * z), 1 - 2 * (x * x + y * y));
  const double pitch = std::asin(std::clamp(2 * (w * y - z * x), -1.0, 1.0));
  const double yaw = std::atan2(2 * (w * z + x * y), 1 - 2 * (y * y + z * z));
  return {roll / kDeg, pitch / kDeg, yaw / kDeg};
}

Orientation Orientation::operator*(const Orientation& other) const {
  return Orientation(q_ * other.q_);
}

Orientation Orientation::inverse() const { return Orientation(q_.conjugate()); }

double Orientation::angle_to(const Orientation& other) const {
  // atan2 of the relative quaternion stays accurate for tiny angles.
  const Eigen::Quaterniond rel = q_.conjugate() * other.q_;
  return 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
}

Orientation slerp(const Orientation& a, const Orientation& b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const Eigen::Vector4d qa = a.quaternion().coeffs();
  Eigen::Vector4d qb = b.quaternion().coeffs();
  double dot = qa.dot(qb);
  if (dot < 0) {
    qb = -qb;
    dot = -dot;
  }
  Eigen::Vector4d r;
  if (dot > 1.0 - kNlerpThreshold) {
    r = (1.0 - t) * qa + t * qb;
  } else {
    const double omega = std::acos(dot);
    const double s = std::sin(omega);
    r = (std::sin((1.0 - t) * omega) / s) * qa + (std::sin(t * omega) / s) * qb;
  }
  // coeffs() order is (x, y, z, w).
  return Orientation::from_wxyz(r[3], r[0], r[1], r[2]);
}

}  // namespace swathcube
