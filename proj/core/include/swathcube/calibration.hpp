#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swathcube/envi_header.hpp"

namespace swathcube {

/// raw: DN as read. relative: DN / response. radiance: (DN - dark) * rad /
/// response. reflectance: radiance / illumination.
enum class ProcessingMode { raw, relative, radiance, reflectance };

std::string_view to_string(ProcessingMode mode);
std::optional<ProcessingMode> parse_processing_mode(std::string_view text);

/// Dark line and radiance coefficients for every (band, sample), measured at
/// `reference` camera settings.
struct CalibrationSet {
  std::size_t bands = 0;
  std::size_t samples = 0;
  std::vector<float> dark;  // bands * samples, DN
  std::vector<float> rad;   // bands * samples, radiance units per DN, > 0
  CaptureSettings reference;
  std::string units;  // opaque, e.g. "microflicks"

  float dark_at(std::size_t band, std::size_t sample) const { return dark[band * samples + sample]; }
  float rad_at(std::size_t band, std::size_t sample) const { return rad[band * samples + sample]; }

  /// Throws Error when sizes disagree or a radiance coefficient is not positive.
  void validate() const;
};

/// Calibration files are ENVI cubes with lines = 2: line 0 holds the dark
/// line, line 1 the radiance coefficients; reference settings come from the
/// sc framerate / sc exposure / sc gain keys.
CalibrationSet load_calibration(const std::filesystem::path& path);
void save_calibration(const std::filesystem::path& base, const CalibrationSet& calib,
                      std::span<const double> wavelengths);

/// (exposure / exposure_ref) * (gain / gain_ref); framerate does not enter.
double compute_response(const CaptureSettings& settings, const CaptureSettings& reference);

/// Per-line response of one cube, strictly positive.
struct ResponseCurve {
  std::vector<float> per_line;

  static ResponseCurve constant(std::size_t lines, float value);
};

/// Replicates the cube's single recorded setting across its lines; a cube
/// without settings gets unity response.
ResponseCurve response_curve(const CubeHeader& header, const CaptureSettings& reference);

struct IlluminationSpectrum {
  std::vector<float> per_band;
};

/// Two-column CSV (wavelength_nm, radiance), linearly interpolated onto the
/// band wavelengths and clamped at the ends. Non-positive values are
/// rejected here so reflectance never divides by zero.
IlluminationSpectrum load_illumination(const std::filesystem::path& path,
                                       std::span<const double> wavelengths);
IlluminationSpectrum parse_illumination(std::string_view csv, std::span<const double> wavelengths,
                                        std::string_view source = "illumination");

/// Radiometric conversion of one value. `calib` may be null for raw and
/// relative modes. Negative results are kept.
float calibrate(float raw, std::size_t band, std::size_t line, std::size_t sample,
                const CalibrationSet* calib, const ResponseCurve& response, ProcessingMode mode,
                const IlluminationSpectrum* illumination = nullptr);

/// radiance / illumination[band]; values above 1 are kept.
float to_reflectance(float radiance, std::size_t band, const IlluminationSpectrum& illumination);

/// Index of the wavelength closest to target; ties go to the lower index.
std::size_t nearest_band(std::span<const double> wavelengths, double target_nm);

/// Everything the fragment stage needs for one (cube, band) pair, prepared
/// once so evaluating a fragment is a few loads and multiplies.
class BandCalibrator {
 public:
  BandCalibrator() = default;
  BandCalibrator(ProcessingMode mode, std::size_t band, const CalibrationSet* calib,
                 const ResponseCurve* response, const IlluminationSpectrum* illumination);

  float operator()(float raw, std::size_t line, std::size_t sample) const {
    switch (mode_) {
      case ProcessingMode::raw:
        return raw;
      case ProcessingMode::relative:
        return (raw - 0.0f) * 1.0f / response_[line];
      case ProcessingMode::radiance:
        return (raw - dark_[sample]) * rad_[sample] / response_[line];
      case ProcessingMode::reflectance:
        return (raw - dark_[sample]) * rad_[sample] / response_[line] / illumination_;
    }
    return raw;
  }

 private:
  ProcessingMode mode_ = ProcessingMode::raw;
  const float* dark_ = nullptr;
  const float* rad_ = nullptr;
  const float* response_ = nullptr;
  float illumination_ = 1.0f;
};

}  // namespace swathcube
