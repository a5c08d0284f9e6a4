#include "swathcube/collection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swathcube/error.hpp"
#include "swathcube/log.hpp"
#include "swathcube/pose_log.hpp"

namespace swathcube {

Bounds MeshSet::bounds(std::size_t first, std::size_t last) const {
  if (meshes.empty() || first > last || last >= meshes.size()) throw Error("cube range out of bounds");
  return mesh_bounds(std::span(meshes).subspan(first, last - first + 1));
}

double line_interval(const CubeHeader& h) {
  if (h.line_times.size() >= 2) {
    std::vector<double> d(h.line_times.size() - 1);
    for (std::size_t i = 0; i + 1 < h.line_times.size(); ++i) d[i] = h.line_times[i + 1] - h.line_times[i];
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
    return d[d.size() / 2];
  }
  if (h.settings && h.settings->framerate > 0) return 1.0 / h.settings->framerate;
  return 0.0;
}

Collection::Collection(CollectionOptions options) : provider_(std::make_unique<CubeProvider>(options.opener)) {
  if (options.cubes.empty()) throw ConfigError({"no cubes given"});
  for (const auto& path : options.cubes) handles_.push_back(provider_->open(path));

  const CubeHeader& first = provider_->header(handles_.front());
  samples_ = first.samples;
  bands_ = first.bands;
  wavelengths_ = first.wavelengths;
  std::optional<double> fov = options.fov_deg ? options.fov_deg : first.fov_deg;
  for (std::size_t i = 0; i < size(); ++i) {
    const CubeHeader& h = header(i);
    if (h.samples != samples_ || h.bands != bands_ || h.wavelengths != wavelengths_)
      throw FormatError("cube " + name(i) + " does not match the samples, bands and wavelengths of " + name(0));
    if (h.line_times.size() != h.lines)
      throw FormatError("cube " + name(i) + " needs 'sc line times' with one entry per line");
    if (!options.fov_deg && h.fov_deg && fov && *h.fov_deg != *fov)
      throw FormatError("cube " + name(i) + " records a different field of view");
    if (i > 0 && !(h.line_times.front() > header(i - 1).line_times.back()))
      throw FormatError("cube " + name(i) + " does not start after " + name(i - 1) + " ends");
  }
  if (!fov) throw ConfigError({"field of view unknown: add 'sc fov' to the headers or pass it explicitly"});
  fov_ = project_fov(*fov);

  records_ = read_pose_log(options.poses);

  // Ground estimate from the camera altitudes while the cubes were recorded.
  const double t0 = header(0).line_times.front();
  const double t1 = header(size() - 1).line_times.back();
  std::vector<double> altitudes;
  for (const auto& r : records_) {
    if (r.timestamp >= t0 && r.timestamp <= t1) altitudes.push_back(r.position.altitude);
  }
  if (altitudes.empty()) {
    for (const auto& r : records_) altitudes.push_back(r.position.altitude);
  }
  ground_estimate_ = estimate_ground_height(altitudes, options.nominal_agl);
  default_ground_ = options.ground_height.value_or(ground_estimate_);
  if (options.ground_height) {
    std::ostringstream msg;
    msg << "ground height " << default_ground_ << " m (override; estimate " << ground_estimate_ << " m)";
    log::info(msg.str());
  } else {
    std::ostringstream msg;
    msg << "ground height estimated at " << ground_estimate_ << " m (" << options.nominal_agl
        << " m below the lowest camera altitude)";
    log::info(msg.str());
  }

  frame_ = make_local_frame(records_, t0, default_ground_);
  const auto nav = to_local(records_, frame_);
  tracks_.reserve(size());
  for (std::size_t i = 0; i < size(); ++i)
    tracks_.push_back(interpolate_poses(nav, header(i).line_times, name(i)));

  chained_.assign(size(), false);
  for (std::size_t i = 0; i + 1 < size(); ++i) {
    const double gap = header(i + 1).line_times.front() - header(i).line_times.back();
    const double interval = line_interval(header(i));
    chained_[i] = interval > 0 && gap <= kChainGapLines * interval;
    if (!chained_[i]) log::info("cube " + name(i) + " is not chained to " + name(i + 1) + ": capture gap");
  }

  if (options.calibration) {
    calibration_ = load_calibration(*options.calibration);
    if (calibration_->samples != samples_ || calibration_->bands != bands_)
      throw FormatError("calibration " + options.calibration->string() + " does not match the cube dimensions");
    reference_ = calibration_->reference;
  } else {
    for (std::size_t i = 0; i < size() && !reference_; ++i) reference_ = header(i).settings;
  }
  if (options.illumination) illumination_ = load_illumination(*options.illumination, wavelengths_);
  for (std::size_t i = 0; i < size(); ++i) {
    responses_.push_back(reference_ ? response_curve(header(i), *reference_)
                                    : ResponseCurve::constant(header(i).lines, 1.0f));
  }

  default_meshes_ = meshes_for(default_ground_);
}

Collection::~Collection() = default;

const CubeHeader& Collection::header(std::size_t cube) const { return provider_->header(handles_.at(cube)); }

const std::string& Collection::name(std::size_t cube) const { return provider_->name(handles_.at(cube)); }

std::shared_ptr<const MeshSet> Collection::meshes_for(double ground_height) const {
  if (!std::isfinite(ground_height)) throw ConfigError({"ground height must be finite"});
  auto set = std::make_shared<MeshSet>();
  set->ground_height = ground_height;
  const GroundPlane ground = ground_plane(frame_, ground_height);
  set->meshes.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    std::optional<Pose> next;
    if (chained_[i]) next = tracks_[i + 1][0];
    set->meshes.push_back(build_mesh(tracks_[i], samples_, fov_, ground, next));
  }
  return set;
}

void Collection::check_mode(ProcessingMode mode) const {
  if ((mode == ProcessingMode::radiance || mode == ProcessingMode::reflectance) && !calibration_)
    throw ConfigError({std::string(to_string(mode)) + " mode needs a calibration file"});
  if (mode == ProcessingMode::reflectance && !illumination_)
    throw ConfigError({"reflectance mode needs an illumination spectrum"});
}

BandCalibrator Collection::calibrator(std::size_t cube, std::size_t band, ProcessingMode mode) const {
  check_mode(mode);
  return BandCalibrator(mode, band, calibration(), &responses_.at(cube), illumination());
}

}  // namespace swathcube
