#include "swathcube/geodesy.hpp"

#include <cmath>
#include <set>

#include <spdlog/spdlog.h>

#include "swathcube/error.hpp"

namespace swathcube::geodesy {

void validate(const GeodeticPoint& p) {
  if (!std::isfinite(p.latitude) || p.latitude < -90.0 || p.latitude > 90.0)
    throw GeodesyError("latitude out of range: " + std::to_string(p.latitude));
  if (!std::isfinite(p.longitude) || p.longitude < -180.0 || p.longitude >= 180.0)
    throw GeodesyError("longitude out of range: " + std::to_string(p.longitude));
  if (!std::isfinite(p.altitude)) throw GeodesyError("altitude is not finite");
}

int natural_zone(double longitude) {
  int zone = static_cast<int>(std::floor(longitude / 6.0)) + 31;
  return std::clamp(zone, 1, 60);
}

double central_meridian(int zone) { return 6.0 * zone - 183.0; }

const TransverseMercator& utm_projection() {
  static const TransverseMercator tm(Ellipsoid::wgs84(), kUtmScaleFactor);
  return tm;
}

namespace {

void check_zone(int zone) {
  if (zone < 1 || zone > 60) throw GeodesyError("UTM zone out of range: " + std::to_string(zone));
}

void check_utm_latitude(double latitude) {
  if (std::abs(latitude) > kUtmMaxLatitude)
    throw GeodesyError("unsupported latitude for UTM: " + std::to_string(latitude));
}

}  // namespace

UtmCoordinate wgs84_to_utm(const GeodeticPoint& p, std::optional<int> zone) {
  validate(p);
  check_utm_latitude(p.latitude);
  const int z = zone.value_or(natural_zone(p.longitude));
  check_zone(z);
  const auto projected = utm_projection().forward(central_meridian(z), p.latitude, p.longitude);
  UtmCoordinate u;
  u.zone = z;
  u.hemisphere = p.latitude < 0 ? Hemisphere::south : Hemisphere::north;
  u.easting = projected.x + kUtmFalseEasting;
  u.northing = projected.y + (u.hemisphere == Hemisphere::south ? kUtmFalseNorthingSouth : 0.0);
  return u;
}

GeodeticPoint utm_to_wgs84(const UtmCoordinate& u) {
  check_zone(u.zone);
  const double y = u.northing - (u.hemisphere == Hemisphere::south ? kUtmFalseNorthingSouth : 0.0);
  const auto g = utm_projection().reverse(central_meridian(u.zone), u.easting - kUtmFalseEasting, y);
  return {g.latitude_deg, g.longitude_deg, 0.0};
}

double grid_convergence(const GeodeticPoint& p, int zone) {
  validate(p);
  check_utm_latitude(p.latitude);
  check_zone(zone);
  return utm_projection().forward(central_meridian(zone), p.latitude, p.longitude).convergence_deg;
}

ZoneSelection select_zone(std::span<const GeodeticPoint> track) {
  if (track.empty()) throw GeodesyError("cannot select a UTM zone for an empty track");
  double lat_sum = 0, lon_sum = 0;
  std::set<int> zones;
  for (const auto& p : track) {
    validate(p);
    lat_sum += p.latitude;
    lon_sum += p.longitude;
    zones.insert(natural_zone(p.longitude));
  }
  const double lat = lat_sum / static_cast<double>(track.size());
  const double lon = lon_sum / static_cast<double>(track.size());

  ZoneSelection sel;
  sel.zone = natural_zone(lon);
  // A centroid exactly on a boundary belongs to the lower zone.
  if (std::fmod(lon + 180.0, 6.0) == 0.0 && sel.zone > 1 && lon > -180.0) sel.zone -= 1;
  sel.hemisphere = lat < 0 ? Hemisphere::south : Hemisphere::north;
  sel.zones_spanned = static_cast<int>(zones.size());
  if (sel.zones_spanned > 1) {
    spdlog::warn("track spans {} UTM zones ({}..{}); using centroid zone {}", sel.zones_spanned,
                 *zones.begin(), *zones.rbegin(), sel.zone);
  }
  return sel;
}

NedPoint to_ned(const UtmCoordinate& u, double altitude, const UtmCoordinate& origin,
                double origin_altitude) {
  if (u.zone != origin.zone || u.hemisphere != origin.hemisphere) {
    throw GeodesyError("UTM zone mismatch: point in " + std::to_string(u.zone) +
                       to_string(u.hemisphere) + ", origin in " + std::to_string(origin.zone) +
                       to_string(origin.hemisphere));
  }
  return {u.northing - origin.northing, u.easting - origin.easting, origin_altitude - altitude};
}

NedPoint LocalFrame::to_ned(const GeodeticPoint& p) const {
  // Points south of the equator in a northern frame keep the northern
  // false northing so the frame stays continuous.
  auto u = wgs84_to_utm(p, origin.zone);
  if (u.hemisphere != origin.hemisphere) {
    u.northing += origin.hemisphere == Hemisphere::south ? kUtmFalseNorthingSouth
                                                         : -kUtmFalseNorthingSouth;
    u.hemisphere = origin.hemisphere;
  }
  return geodesy::to_ned(u, p.altitude, origin, origin_altitude);
}

GeodeticPoint LocalFrame::to_geodetic(const NedPoint& p) const {
  UtmCoordinate u = origin;
  u.northing = origin.northing + p.north;
  u.easting = origin.easting + p.east;
  auto g = utm_to_wgs84(u);
  g.altitude = origin_altitude - p.down;
  return g;
}

std::string to_string(Hemisphere h) { return h == Hemisphere::north ? "N" : "S"; }

}  // namespace swathcube::geodesy
