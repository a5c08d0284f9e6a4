#pragma once

#include <filesystem>
#include <memory>

#include <oracle/capture.hpp>
#include <oracle/flight.hpp>
#include <swathcube/collection.hpp>

#include "unit/support.hpp"

namespace testing_support {

/// A short straight flight: two chained cubes of 120 lines, 96 samples and
/// three bands.
inline oracle::FlightPlan small_plan(double noise_deg = 2.0) {
  oracle::FlightPlan plan;
  plan.camera.samples = 96;
  plan.camera.bands = 3;
  plan.camera.first_wavelength = 450;
  plan.camera.last_wavelength = 650;
  plan.roll_noise_deg = noise_deg;
  plan.pitch_noise_deg = noise_deg;
  plan.yaw_noise_deg = noise_deg;
  plan.legs.push_back({0.0, 0.0, 0.0, 2, 120});
  return plan;
}

/// A capture written to a temporary directory.
struct Flight {
  explicit Flight(const oracle::FlightPlan& plan, oracle::CaptureOptions options = {},
                  const std::string& tag = "flight")
      : dir(tag), traj(plan), files(oracle::write_capture(dir.path(), traj, options)) {}

  swathcube::CollectionOptions collection_options() const {
    swathcube::CollectionOptions o;
    o.cubes = files.cubes;
    o.poses = files.poses;
    o.calibration = files.calibration;
    return o;
  }

  TempDir dir;
  oracle::Trajectory traj;
  oracle::CaptureFiles files;
};

}  // namespace testing_support
