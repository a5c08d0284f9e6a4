#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include <swathcube/calibration.hpp>
#include <swathcube/envi_header.hpp>
#include <swathcube/pose.hpp>

#include "oracle/flight.hpp"
#include "oracle/scene.hpp"

namespace oracle {

struct CaptureOptions {
  Scene scene = Scene::constant(1000);
  swathcube::DataType data_type = swathcube::DataType::f32;
  /// When set, DN = dark + value * response / rad, so radiance mode recovers
  /// the scene value. Without it DN = value.
  const swathcube::CalibrationSet* calibration = nullptr;
  /// Per-cube multiplier on the camera gain (response injection).
  std::vector<double> cube_gain;
  bool write_fov = true;
  bool write_settings = true;
};

/// Scene pattern seen by every sample of one cube: the center ray of sample
/// s at the middle of line i's exposure interval, values[i * S + s].
std::vector<double> simulate_pattern(const Trajectory& traj, const Scene& scene, std::size_t cube);

/// Settings recorded for a cube.
swathcube::CaptureSettings cube_settings(const Trajectory& traj, const CaptureOptions& options,
                                         std::size_t cube);

/// Band plane of one cube as stored DN (before type quantization).
std::vector<float> simulate_band(const Trajectory& traj, const CaptureOptions& options, std::size_t cube,
                                 std::size_t band, const std::vector<double>& pattern);

/// INS samples at the plan's rate: WGS84 positions and true-north attitude
/// (the grid yaw plus the grid convergence at each sample position).
std::vector<swathcube::InsRecord> simulate_ins(const Trajectory& traj);

swathcube::CubeHeader cube_header(const Trajectory& traj, const CaptureOptions& options, std::size_t cube);

struct CaptureFiles {
  std::vector<std::filesystem::path> cubes;  // header paths
  std::filesystem::path poses;
  std::filesystem::path cube_list;
  std::optional<std::filesystem::path> calibration;
};

/// Writes cube_NNN.hdr/.raw, poses.csv, cubes.txt and, with calibration,
/// calibration.hdr/.raw into dir.
CaptureFiles write_capture(const std::filesystem::path& dir, const Trajectory& traj,
                           const CaptureOptions& options);

/// Dark and radiance coefficients with mild per-sample structure.
swathcube::CalibrationSet make_calibration(std::size_t bands, std::size_t samples,
                                           const swathcube::CaptureSettings& reference, std::uint64_t seed);

}  // namespace oracle
