#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

/// Analytic ground pattern in meters north/east of a scene anchor. Band b
/// sees offset[b] + gain[b] * pattern(north, east); bands without an entry
/// use gain 1, offset 0.
struct Scene {
  std::function<double(double north, double east)> pattern;
  std::vector<double> gain;
  std::vector<double> offset;
  double low = 0;   // range of the pattern
  double high = 1;

  double value(double north, double east, std::size_t band = 0) const;
  double band_gain(std::size_t band) const { return band < gain.size() ? gain[band] : 1.0; }
  double band_offset(std::size_t band) const { return band < offset.size() ? offset[band] : 0.0; }

  static Scene constant(double v);
  /// Bands of width period / 2 alternating low/high along the direction
  /// `normal_deg` (0 = north, 90 = east). Edges sit at integer multiples of
  /// period / 2 along that direction.
  static Scene stripes(double period, double normal_deg, double low = 0, double high = 1);
  static Scene checker(double size, double low = 0, double high = 1);
  static Scene gradient(double per_meter_north, double per_meter_east, double base = 0);
  /// Smooth: mean + amp/2 * (sin(2 pi n / period) + sin(2 pi e / period)).
  static Scene waves(double period, double mean = 0.5, double amp = 0.25);
};

}  // namespace oracle
