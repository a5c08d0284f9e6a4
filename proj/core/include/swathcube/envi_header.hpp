#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swathcube/geodesy.hpp"

namespace swathcube {

/// ENVI data type codes supported for reading and writing.
enum class DataType : int { u8 = 1, i16 = 2, f32 = 4, u16 = 12 };

std::size_t bytes_per_sample(DataType type);

enum class Interleave { bsq, bil, bip };

std::string_view to_string(Interleave interleave);

/// Camera settings recorded with a cube (or with a calibration reference).
struct CaptureSettings {
  double framerate = 0;      // Hz
  double exposure_time = 0;  // seconds
  double gain = 1;           // linear factor
};

/// ENVI "map info" for UTM outputs. The tie point (easting, northing) sits
/// at 1-based image location (ref_x, ref_y); (1, 1) is the outer corner of
/// the first pixel and (1.5, 1.5) its center.
struct MapInfo {
  double ref_x = 1;
  double ref_y = 1;
  int zone = 0;
  geodesy::Hemisphere hemisphere = geodesy::Hemisphere::north;
  double easting = 0;
  double northing = 0;
  double pixel_size_x = 0;
  double pixel_size_y = 0;
};

struct CubeHeader {
  std::size_t samples = 0;
  std::size_t lines = 0;
  std::size_t bands = 0;
  Interleave interleave = Interleave::bsq;
  DataType data_type = DataType::f32;
  int byte_order = 0;  // 0 little endian, 1 big endian
  std::size_t header_offset = 0;
  std::vector<double> wavelengths;  // nm, strictly increasing, one per band

  // Extension keys ("sc ...").
  std::optional<CaptureSettings> settings;
  std::vector<double> line_times;  // seconds, one per line
  std::optional<double> fov_deg;

  std::optional<MapInfo> map_info;
  std::optional<double> data_ignore_value;
  std::optional<std::string> description;

  /// Unrecognized keys, preserved in order of appearance.
  std::vector<std::pair<std::string, std::string>> extra;

  std::size_t band_bytes() const { return samples * lines * bytes_per_sample(data_type); }
  std::size_t data_bytes() const { return band_bytes() * bands; }
};

int native_byte_order();

/// Parses header text. Errors carry `source:line:` prefixes. Does not look at
/// the data file.
CubeHeader parse_header(std::string_view text, std::string_view source = "header");

std::string format_header(const CubeHeader& header);

/// `x.hdr` for inputs `x`, `x.hdr`, `x.raw`, ...
std::filesystem::path header_path_for(const std::filesystem::path& path);

/// Locates the raw data file beside a header: the header path without
/// extension, then .raw, .img, .bsq, .dat. Empty when none exists.
std::filesystem::path find_data_file(const std::filesystem::path& header_path);

/// Reads and validates a header, and checks that the data file size matches
/// samples * lines * bands * bytes (plus header offset). Only stats the data
/// file.
CubeHeader read_header(const std::filesystem::path& path);

}  // namespace swathcube
