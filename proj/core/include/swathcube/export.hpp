#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "swathcube/collection.hpp"
#include "swathcube/raster.hpp"

namespace swathcube {

struct ExportRequest {
  std::vector<std::size_t> bands;  // written in ascending wavelength order, duplicates dropped
  double gsd = 0;
  ProcessingMode mode = ProcessingMode::radiance;
  std::size_t first_cube = 0;
  std::size_t last_cube = std::numeric_limits<std::size_t>::max();  // clamped to the last cube
  float no_data = 0.0f;
  bool mask = false;  // also write <output>_mask, 1 where covered
  std::optional<double> ground_height;
  std::filesystem::path output;
  unsigned jobs = 1;
  /// Called after each finished band with (bands done, total).
  std::function<void(std::size_t, std::size_t)> progress;
  CancelCheck cancelled;
};

/// Wall time of each stage in milliseconds.
struct StageTimes {
  double load = 0;
  double mesh = 0;
  double render = 0;
  double write = 0;
};

struct ExportResult {
  std::filesystem::path header;
  std::filesystem::path data;
  std::optional<std::filesystem::path> mask_header;
  PixelGrid grid;
  std::size_t bands = 0;
  std::size_t covered = 0;
  StageTimes times;
};

/// Renders each requested band over the bounds of the selected cubes at the
/// given GSD and streams the planes into a float32 BSQ cube with UTM map
/// info. Output files are removed on any failure.
ExportResult export_cube(const Collection& collection, const ExportRequest& request);

/// UTM map info for a grid in the collection frame, tied at the center of
/// the top-left pixel.
MapInfo grid_map_info(const geodesy::LocalFrame& frame, const PixelGrid& grid);

}  // namespace swathcube
