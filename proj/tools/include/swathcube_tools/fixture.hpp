#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <oracle/capture.hpp>
#include <oracle/flight.hpp>

namespace swathcube::tools {

struct FixtureConfig {
  oracle::FlightPlan plan;
  oracle::CaptureOptions options;
  std::optional<CalibrationSet> calibration;  // options.calibration points here
  std::filesystem::path output;
};

/// Synthetic survey from fixture arguments: parallel passes flown in
/// alternating directions over an analytic scene.
FixtureConfig fixture_config(const std::vector<std::string>& args);

/// Writes the capture and prints the written files to `out`.
int fixture_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swathcube::tools
