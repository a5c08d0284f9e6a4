#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swathcube/calibration.hpp"
#include "swathcube/export.hpp"

namespace swathcube {

struct JobConfig {
  std::filesystem::path cubes;  // list file, one cube path per line
  std::filesystem::path poses;
  std::optional<std::filesystem::path> calibration;
  std::optional<std::filesystem::path> illumination;
  std::vector<double> wavelengths;  // nm; empty with all_wavelengths means every band
  bool all_wavelengths = false;
  double gsd = 0;
  std::optional<double> ground;  // nullopt: estimate
  double ground_agl = kDefaultNominalAgl;
  std::optional<std::size_t> range_first;
  std::optional<std::size_t> range_last;
  std::filesystem::path output;
  ProcessingMode mode = ProcessingMode::radiance;
  unsigned jobs = 0;  // 0: hardware parallelism
  float no_data = 0.0f;
  std::optional<double> fov;
  bool mask = false;
};

/// Applies one `key = value` setting; keys match the long flag names
/// (cubes, poses, calib, illumination, wavelengths, gsd, ground, ground-agl,
/// range, mode, output, jobs, no-data, fov, mask). Relative paths resolve
/// against base_dir. Throws ConfigError.
void apply_setting(JobConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

/// Parses a config file body: `key = value` lines, `#` comments.
JobConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {},
                       std::string_view source = "config");
JobConfig read_config(const std::filesystem::path& path);

/// Reads a cube list file: one path per line relative to the list's
/// directory; blank lines and `#` comments are skipped.
std::vector<std::filesystem::path> read_cube_list(const std::filesystem::path& path);

struct ValidatedJob {
  JobConfig config;
  std::vector<std::filesystem::path> cubes;
  std::vector<std::string> warnings;
};

/// Checks every input at once and throws a ConfigError listing all
/// problems. Wavelengths outside the sensor range only warn.
ValidatedJob validate_config(const JobConfig& config);

struct JobReport {
  ExportResult result;
  double ground_height = 0;
  std::vector<std::size_t> bands;
  double total_ms = 0;
};

/// Validates, opens the collection, exports, and re-reads the written
/// header. Writes `stage=<name> wall_ms=<ms>` lines to `report`.
JobReport run_export(const JobConfig& config, std::ostream& report);

}  // namespace swathcube
