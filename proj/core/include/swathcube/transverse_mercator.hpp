#pragma once

#include <array>

namespace swathcube::geodesy {

struct Ellipsoid {
  double equatorial_radius;  // meters
  double flattening;

  static constexpr Ellipsoid wgs84() { return {6378137.0, 1.0 / 298.257223563}; }
  static constexpr Ellipsoid clarke1866() { return {6378206.4, 1.0 / 294.978698214}; }
};

/// Transverse Mercator on an ellipsoid using the Krüger series carried to
/// sixth order in the third flattening. Accurate to a few nanometers within
/// 4000 km of the central meridian.
class TransverseMercator {
 public:
  TransverseMercator(Ellipsoid ellipsoid, double scale_factor);

  struct Projected {
    double x;                // meters east of the central meridian
    double y;                // meters north of the equator
    double convergence_deg;  // bearing of grid north clockwise from true north
    double scale;
  };

  struct Geographic {
    double latitude_deg;
    double longitude_deg;
  };

  Projected forward(double central_meridian_deg, double latitude_deg,
                    double longitude_deg) const;
  Geographic reverse(double central_meridian_deg, double x, double y) const;

  double scale_factor() const noexcept { return k0_; }

 private:
  double taupf(double tau) const;
  double tauf(double taup) const;

  Ellipsoid ellipsoid_;
  double k0_;
  double e2_;
  double e_;
  double rectifying_radius_;  // A in the series
  std::array<double, 7> alpha_{};
  std::array<double, 7> beta_{};
};

}  // namespace swathcube::geodesy
