#pragma once

#include <optional>
#include <span>
#include <string>

#include "swathcube/transverse_mercator.hpp"

namespace swathcube::geodesy {

/// WGS84 position. Latitude in [-90, 90], longitude in [-180, 180), altitude
/// in meters above the ellipsoid.
struct GeodeticPoint {
  double latitude = 0;
  double longitude = 0;
  double altitude = 0;
};

enum class Hemisphere { north, south };

struct UtmCoordinate {
  double easting = 0;
  double northing = 0;
  int zone = 0;
  Hemisphere hemisphere = Hemisphere::north;
};

/// Local North-East-Down meters relative to a collection origin.
struct NedPoint {
  double north = 0;
  double east = 0;
  double down = 0;

  friend bool operator==(const NedPoint&, const NedPoint&) = default;
};

inline constexpr double kUtmScaleFactor = 0.9996;
inline constexpr double kUtmFalseEasting = 500000.0;
inline constexpr double kUtmFalseNorthingSouth = 10000000.0;
inline constexpr double kUtmMaxLatitude = 84.0;

void validate(const GeodeticPoint& p);

/// floor(lon / 6) + 31, with lon = 180 folded into zone 60.
int natural_zone(double longitude);
double central_meridian(int zone);

const TransverseMercator& utm_projection();

/// Throws GeodesyError outside +-84 degrees latitude or for a zone outside
/// [1, 60]. The hemisphere follows the sign of the latitude.
UtmCoordinate wgs84_to_utm(const GeodeticPoint& p, std::optional<int> zone = std::nullopt);

/// Inverse of wgs84_to_utm; the returned altitude is zero.
GeodeticPoint utm_to_wgs84(const UtmCoordinate& u);

/// Angle from true north to grid north in degrees, clockwise positive. It is
/// positive east of the central meridian in the northern hemisphere and zero
/// on the central meridian.
double grid_convergence(const GeodeticPoint& p, int zone);

struct ZoneSelection {
  int zone = 0;
  Hemisphere hemisphere = Hemisphere::north;
  int zones_spanned = 1;
};

/// Picks the zone of the track centroid. A centroid exactly on a zone
/// boundary goes to the lower-numbered zone. Tracks touching more than one
/// zone are still assigned the centroid zone; a warning is logged.
ZoneSelection select_zone(std::span<const GeodeticPoint> track);

/// north = northing - origin.northing, east = easting - origin.easting,
/// down = origin_altitude - altitude. Throws GeodesyError on zone mismatch.
NedPoint to_ned(const UtmCoordinate& u, double altitude, const UtmCoordinate& origin,
                double origin_altitude);

/// The single projected frame shared by every cube in a collection.
struct LocalFrame {
  UtmCoordinate origin;
  double origin_altitude = 0;
  double convergence_deg = 0;  // grid convergence at the origin

  NedPoint to_ned(const GeodeticPoint& p) const;
  GeodeticPoint to_geodetic(const NedPoint& p) const;
};

std::string to_string(Hemisphere h);

}  // namespace swathcube::geodesy
