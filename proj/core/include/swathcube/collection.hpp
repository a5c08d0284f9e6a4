#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swathcube/calibration.hpp"
#include "swathcube/cube_provider.hpp"
#include "swathcube/mesh.hpp"
#include "swathcube/pose.hpp"

namespace swathcube {

struct CollectionOptions {
  std::vector<std::filesystem::path> cubes;  // capture order
  std::filesystem::path poses;
  std::optional<std::filesystem::path> calibration;
  std::optional<std::filesystem::path> illumination;
  std::optional<double> ground_height;  // overrides the estimate
  double nominal_agl = kDefaultNominalAgl;
  std::optional<double> fov_deg;  // overrides the headers' sc fov
  SourceOpener opener;
};

/// Meshes of every cube for one ground height.
struct MeshSet {
  double ground_height = 0;
  std::vector<FootprintMesh> meshes;

  /// Bounds of cubes [first, last].
  Bounds bounds(std::size_t first, std::size_t last) const;
  Bounds bounds() const { return bounds(0, meshes.size() - 1); }
};

/// Cube i is chained to cube i + 1 when the next cube starts within this
/// many line intervals of its last line.
inline constexpr double kChainGapLines = 1.5;

/// A flight: cubes in capture order, one pose log, one collection frame and
/// optional calibration. Opening reads headers and poses only.
class Collection {
 public:
  explicit Collection(CollectionOptions options);
  ~Collection();
  Collection(const Collection&) = delete;
  Collection& operator=(const Collection&) = delete;

  std::size_t size() const noexcept { return handles_.size(); }
  const CubeHeader& header(std::size_t cube) const;
  const std::string& name(std::size_t cube) const;
  CubeHandle handle(std::size_t cube) const { return handles_.at(cube); }
  CubeProvider& provider() noexcept { return *provider_; }
  const CubeProvider& provider() const noexcept { return *provider_; }

  std::size_t samples() const noexcept { return samples_; }
  std::size_t bands() const noexcept { return bands_; }
  const std::vector<double>& wavelengths() const noexcept { return wavelengths_; }
  double fov_deg() const noexcept { return fov_.fov_deg; }

  const std::vector<InsRecord>& records() const noexcept { return records_; }
  const geodesy::LocalFrame& frame() const noexcept { return frame_; }
  const PoseTrack& track(std::size_t cube) const { return tracks_.at(cube); }
  bool chained(std::size_t cube) const { return chained_.at(cube); }

  double ground_estimate() const noexcept { return ground_estimate_; }
  /// Ground height the collection was opened with (override or estimate).
  double default_ground_height() const noexcept { return default_ground_; }

  std::shared_ptr<const MeshSet> meshes() const { return default_meshes_; }
  /// Re-meshes for another ground height; the frame stays fixed.
  std::shared_ptr<const MeshSet> meshes_for(double ground_height) const;

  const CalibrationSet* calibration() const noexcept { return calibration_ ? &*calibration_ : nullptr; }
  const IlluminationSpectrum* illumination() const noexcept {
    return illumination_ ? &*illumination_ : nullptr;
  }
  /// Settings the response is relative to: the calibration reference, else
  /// the first cube that records settings.
  const std::optional<CaptureSettings>& reference() const noexcept { return reference_; }
  const ResponseCurve& response(std::size_t cube) const { return responses_.at(cube); }

  /// Throws ConfigError when the mode needs data the collection lacks.
  void check_mode(ProcessingMode mode) const;
  BandCalibrator calibrator(std::size_t cube, std::size_t band, ProcessingMode mode) const;

 private:
  std::unique_ptr<CubeProvider> provider_;
  std::vector<CubeHandle> handles_;
  std::size_t samples_ = 0;
  std::size_t bands_ = 0;
  std::vector<double> wavelengths_;
  FovVectors fov_;
  std::vector<InsRecord> records_;
  geodesy::LocalFrame frame_;
  std::vector<PoseTrack> tracks_;
  std::vector<bool> chained_;
  double ground_estimate_ = 0;
  double default_ground_ = 0;
  std::shared_ptr<const MeshSet> default_meshes_;
  std::optional<CalibrationSet> calibration_;
  std::optional<IlluminationSpectrum> illumination_;
  std::optional<CaptureSettings> reference_;
  std::vector<ResponseCurve> responses_;
};

/// Line spacing of a cube in seconds (median of consecutive differences, or
/// 1 / framerate for single-line cubes).
double line_interval(const CubeHeader& header);

}  // namespace swathcube
