#include "swathcube/transverse_mercator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace swathcube::geodesy {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double wrap_longitude(double degrees) {
  double r = std::remainder(degrees, 360.0);
  return r == 180.0 ? -180.0 : r;
}

}  // namespace

TransverseMercator::TransverseMercator(Ellipsoid ellipsoid, double scale_factor)
    : ellipsoid_(ellipsoid), k0_(scale_factor) {
  const double f = ellipsoid_.flattening;
  e2_ = f * (2 - f);
  e_ = std::sqrt(e2_);
  const double n = f / (2 - f);
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;

  rectifying_radius_ = ellipsoid_.equatorial_radius / (1 + n) *
                       (1 + n2 / 4 + n4 / 64 + n6 / 256);

  alpha_[1] = n / 2 - 2 * n2 / 3 + 5 * n3 / 16 + 41 * n4 / 180 - 127 * n5 / 288 +
              7891 * n6 / 37800;
  alpha_[2] = 13 * n2 / 48 - 3 * n3 / 5 + 557 * n4 / 1440 + 281 * n5 / 630 -
              1983433 * n6 / 1935360;
  alpha_[3] = 61 * n3 / 240 - 103 * n4 / 140 + 15061 * n5 / 26880 +
              167603 * n6 / 181440;
  alpha_[4] = 49561 * n4 / 161280 - 179 * n5 / 168 + 6601661 * n6 / 7257600;
  alpha_[5] = 34729 * n5 / 80640 - 3418889 * n6 / 1995840;
  alpha_[6] = 212378941 * n6 / 319334400;

  beta_[1] = n / 2 - 2 * n2 / 3 + 37 * n3 / 96 - n4 / 360 - 81 * n5 / 512 +
             96199 * n6 / 604800;
  beta_[2] = n2 / 48 + n3 / 15 - 437 * n4 / 1440 + 46 * n5 / 105 -
             1118711 * n6 / 3870720;
  beta_[3] = 17 * n3 / 480 - 37 * n4 / 840 - 209 * n5 / 4480 + 5569 * n6 / 90720;
  beta_[4] = 4397 * n4 / 161280 - 11 * n5 / 504 - 830251 * n6 / 7257600;
  beta_[5] = 4583 * n5 / 161280 - 108847 * n6 / 3991680;
  beta_[6] = 20648693 * n6 / 638668800;
}

// tan of the conformal latitude from tan of the geodetic latitude.
double TransverseMercator::taupf(double tau) const {
  const double tau1 = std::hypot(1.0, tau);
  const double sig = std::sinh(e_ * std::atanh(e_ * tau / tau1));
  return std::hypot(1.0, sig) * tau - sig * tau1;
}

// Newton inversion of taupf.
double TransverseMercator::tauf(double taup) const {
  const double e2m = 1 - e2_;
  double tau = taup / e2m;
  const double tol = 0.1 * std::sqrt(std::numeric_limits<double>::epsilon());
  for (int i = 0; i < 8; ++i) {
    const double taupa = taupf(tau);
    const double dtau = (taup - taupa) * (1 + e2m * tau * tau) /
                        (e2m * std::hypot(1.0, tau) * std::hypot(1.0, taupa));
    tau += dtau;
    if (std::abs(dtau) < tol * std::max(1.0, std::abs(tau))) break;
  }
  return tau;
}

TransverseMercator::Projected TransverseMercator::forward(double central_meridian_deg,
                                                          double latitude_deg,
                                                          double longitude_deg) const {
  const double lam = wrap_longitude(longitude_deg - central_meridian_deg) * kDeg;
  const double phi = latitude_deg * kDeg;
  const double tau = std::tan(phi);
  const double taup = taupf(tau);
  const double clam = std::cos(lam), slam = std::sin(lam);

  const double xip = std::atan2(taup, clam);
  const double etap = std::asinh(slam / std::hypot(taup, clam));

  double xi = xip, eta = etap;
  double p = 1.0, q = 0.0;
  for (int j = 1; j <= 6; ++j) {
    const double a = 2.0 * j * xip, b = 2.0 * j * etap;
    const double sa = std::sin(a), ca = std::cos(a);
    const double shb = std::sinh(b), chb = std::cosh(b);
    xi += alpha_[j] * sa * chb;
    eta += alpha_[j] * ca * shb;
    p += 2.0 * j * alpha_[j] * ca * chb;
    q += 2.0 * j * alpha_[j] * sa * shb;
  }

  Projected out{};
  out.x = k0_ * rectifying_radius_ * eta;
  out.y = k0_ * rectifying_radius_ * xi;
  const double gamma_p = std::atan2(std::sin(xip) * std::sinh(etap),
                                    std::cos(xip) * std::cosh(etap));
  const double gamma_pp = std::atan2(q, p);
  out.convergence_deg = (gamma_p + gamma_pp) / kDeg;
  const double sphi = std::sin(phi);
  out.scale = k0_ * rectifying_radius_ / ellipsoid_.equatorial_radius *
              std::sqrt(1 - e2_ * sphi * sphi) * std::hypot(1.0, tau) /
              std::hypot(taup, clam) * std::hypot(p, q);
  return out;
}

TransverseMercator::Geographic TransverseMercator::reverse(double central_meridian_deg,
                                                           double x, double y) const {
  const double xi = y / (k0_ * rectifying_radius_);
  const double eta = x / (k0_ * rectifying_radius_);
  double xip = xi, etap = eta;
  for (int j = 1; j <= 6; ++j) {
    const double a = 2.0 * j * xi, b = 2.0 * j * eta;
    xip -= beta_[j] * std::sin(a) * std::cosh(b);
    etap -= beta_[j] * std::cos(a) * std::sinh(b);
  }
  const double shetap = std::sinh(etap);
  const double cxip = std::cos(xip);
  const double taup = std::sin(xip) / std::hypot(shetap, cxip);
  const double lam = std::atan2(shetap, cxip);
  const double tau = tauf(taup);
  return {std::atan(tau) / kDeg, wrap_longitude(central_meridian_deg + lam / kDeg)};
}

}  // namespace swathcube::geodesy
