#include "swathcube/calibration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "swathcube/cube_provider.hpp"
#include "swathcube/cube_writer.hpp"
#include "swathcube/error.hpp"

namespace swathcube {

std::string_view to_string(ProcessingMode mode) {
  switch (mode) {
    case ProcessingMode::raw:
      return "raw";
    case ProcessingMode::relative:
      return "relative";
    case ProcessingMode::radiance:
      return "radiance";
    case ProcessingMode::reflectance:
      return "reflectance";
  }
  return "raw";
}

std::optional<ProcessingMode> parse_processing_mode(std::string_view text) {
  for (auto m : {ProcessingMode::raw, ProcessingMode::relative, ProcessingMode::radiance,
                 ProcessingMode::reflectance}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

void CalibrationSet::validate() const {
  if (dark.size() != bands * samples || rad.size() != bands * samples)
    throw Error("calibration arrays do not match bands x samples");
  for (float r : rad) {
    if (!(r > 0.0f)) throw Error("calibration radiance coefficients must be strictly positive");
  }
  if (!(reference.exposure_time > 0) || !(reference.gain > 0))
    throw Error("calibration reference settings must be positive");
}

CalibrationSet load_calibration(const std::filesystem::path& path) {
  CubeProvider provider;
  const auto handle = provider.open(path);
  const CubeHeader& h = provider.header(handle);
  if (h.lines != 2)
    throw FormatError(header_path_for(path).string() + ":1: calibration cube must have 2 lines (dark, rad)");
  if (!h.settings)
    throw FormatError(header_path_for(path).string() +
                      ":1: calibration cube needs sc framerate / sc exposure / sc gain");
  CalibrationSet c;
  c.bands = h.bands;
  c.samples = h.samples;
  c.reference = *h.settings;
  c.dark.resize(c.bands * c.samples);
  c.rad.resize(c.bands * c.samples);
  for (const auto& [k, v] : h.extra) {
    if (k == "sc radiance units") c.units = v;
  }
  for (std::size_t b = 0; b < h.bands; ++b) {
    const BandPlane plane = provider.read_band(handle, b);
    std::copy_n(plane.values.begin(), c.samples, c.dark.begin() + static_cast<std::ptrdiff_t>(b * c.samples));
    std::copy_n(plane.values.begin() + static_cast<std::ptrdiff_t>(c.samples), c.samples,
                c.rad.begin() + static_cast<std::ptrdiff_t>(b * c.samples));
  }
  c.validate();
  return c;
}

void save_calibration(const std::filesystem::path& base, const CalibrationSet& calib,
                      std::span<const double> wavelengths) {
  calib.validate();
  CubeHeader h;
  h.samples = calib.samples;
  h.lines = 2;
  h.bands = calib.bands;
  h.data_type = DataType::f32;
  h.byte_order = native_byte_order();
  h.wavelengths.assign(wavelengths.begin(), wavelengths.end());
  h.settings = calib.reference;
  h.description = "calibration: line 0 dark, line 1 radiance coefficients";
  if (!calib.units.empty()) h.extra.emplace_back("sc radiance units", calib.units);
  CubeWriter writer(base, h);
  std::vector<float> plane(calib.samples * 2);
  for (std::size_t b = 0; b < calib.bands; ++b) {
    std::copy_n(calib.dark.begin() + static_cast<std::ptrdiff_t>(b * calib.samples), calib.samples, plane.begin());
    std::copy_n(calib.rad.begin() + static_cast<std::ptrdiff_t>(b * calib.samples), calib.samples,
                plane.begin() + static_cast<std::ptrdiff_t>(calib.samples));
    writer.write_band(plane);
  }
  writer.finish();
}

double compute_response(const CaptureSettings& s, const CaptureSettings& ref) {
  if (!(s.exposure_time > 0) || !(s.gain > 0) || !(s.framerate > 0) || !(ref.exposure_time > 0) ||
      !(ref.gain > 0)) {
    throw Error("camera settings must be positive");
  }
  return (s.exposure_time / ref.exposure_time) * (s.gain / ref.gain);
}

ResponseCurve ResponseCurve::constant(std::size_t lines, float value) {
  return {std::vector<float>(lines, value)};
}

ResponseCurve response_curve(const CubeHeader& header, const CaptureSettings& reference) {
  if (!header.settings) return ResponseCurve::constant(header.lines, 1.0f);
  return ResponseCurve::constant(header.lines,
                                 static_cast<float>(compute_response(*header.settings, reference)));
}

IlluminationSpectrum parse_illumination(std::string_view csv, std::span<const double> wavelengths,
                                        std::string_view source) {
  std::vector<std::pair<double, double>> table;
  std::size_t row = 0;
  std::stringstream ss{std::string(csv)};
  std::string line;
  while (std::getline(ss, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw FormatError(std::string(source) + ":" + std::to_string(row) + ": expected 'wavelength_nm,radiance'");
    double wl = 0, value = 0;
    const char* b = line.data();
    auto r1 = std::from_chars(b, b + comma, wl);
    auto r2 = std::from_chars(b + comma + 1, b + line.size(), value);
    if (r1.ec != std::errc() || r2.ec != std::errc()) {
      if (table.empty() && row == 1) continue;  // header row
      throw FormatError(std::string(source) + ":" + std::to_string(row) + ": bad number");
    }
    if (!(value > 0))
      throw FormatError(std::string(source) + ":" + std::to_string(row) +
                        ": illumination must be positive (reflectance divides by it)");
    if (!table.empty() && !(wl > table.back().first))
      throw FormatError(std::string(source) + ":" + std::to_string(row) + ": wavelengths must increase");
    table.emplace_back(wl, value);
  }
  if (table.empty()) throw FormatError(std::string(source) + ": no illumination rows");

  IlluminationSpectrum out;
  out.per_band.reserve(wavelengths.size());
  for (double wl : wavelengths) {
    if (wl <= table.front().first) {
      out.per_band.push_back(static_cast<float>(table.front().second));
      continue;
    }
    if (wl >= table.back().first) {
      out.per_band.push_back(static_cast<float>(table.back().second));
      continue;
    }
    auto hi = std::lower_bound(table.begin(), table.end(), wl,
                               [](const auto& e, double w) { return e.first < w; });
    auto lo = hi - 1;
    const double t = (wl - lo->first) / (hi->first - lo->first);
    out.per_band.push_back(static_cast<float>(lo->second + t * (hi->second - lo->second)));
  }
  return out;
}

IlluminationSpectrum load_illumination(const std::filesystem::path& path,
                                       std::span<const double> wavelengths) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open illumination spectrum " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_illumination(ss.str(), wavelengths, path.string());
}

float to_reflectance(float radiance, std::size_t band, const IlluminationSpectrum& illumination) {
  return radiance / illumination.per_band.at(band);
}

float calibrate(float raw, std::size_t band, std::size_t line, std::size_t sample,
                const CalibrationSet* calib, const ResponseCurve& response, ProcessingMode mode,
                const IlluminationSpectrum* illumination) {
  // Disabled calibration means dark = 0 and rad = 1; raw also drops response.
  float dark = 0.0f;
  float rad = 1.0f;
  float resp = 1.0f;
  if (mode != ProcessingMode::raw) resp = response.per_line.at(line);
  if (mode == ProcessingMode::radiance || mode == ProcessingMode::reflectance) {
    if (calib == nullptr) throw Error(std::string(to_string(mode)) + " mode needs a calibration set");
    dark = calib->dark_at(band, sample);
    rad = calib->rad_at(band, sample);
  }
  if (mode == ProcessingMode::raw) return raw;
  const float radiance = (raw - dark) * rad / resp;
  if (mode != ProcessingMode::reflectance) return radiance;
  if (illumination == nullptr) throw Error("reflectance mode needs an illumination spectrum");
  return to_reflectance(radiance, band, *illumination);
}

std::size_t nearest_band(std::span<const double> wavelengths, double target_nm) {
  if (wavelengths.empty()) throw Error("nearest_band: empty wavelength list");
  std::size_t best = 0;
  double best_dist = std::abs(wavelengths[0] - target_nm);
  for (std::size_t i = 1; i < wavelengths.size(); ++i) {
    const double d = std::abs(wavelengths[i] - target_nm);
    if (d < best_dist) {
      best = i;
      best_dist = d;
    }
  }
  return best;
}

BandCalibrator::BandCalibrator(ProcessingMode mode, std::size_t band, const CalibrationSet* calib,
                               const ResponseCurve* response,
                               const IlluminationSpectrum* illumination)
    : mode_(mode) {
  if (mode != ProcessingMode::raw) {
    if (response == nullptr) throw Error("calibrator needs a response curve");
    response_ = response->per_line.data();
  }
  if (mode == ProcessingMode::radiance || mode == ProcessingMode::reflectance) {
    if (calib == nullptr) throw Error(std::string(to_string(mode)) + " mode needs a calibration set");
    if (band >= calib->bands) throw Error("calibration has no band " + std::to_string(band));
    dark_ = calib->dark.data() + band * calib->samples;
    rad_ = calib->rad.data() + band * calib->samples;
  }
  if (mode == ProcessingMode::reflectance) {
    if (illumination == nullptr) throw Error("reflectance mode needs an illumination spectrum");
    illumination_ = illumination->per_band.at(band);
  }
}

}  // namespace swathcube
