#include <cmath>
#include <numbers>
#include <ostream>

#include <swathcube/error.hpp>
#include <swathcube/log.hpp>

#include "args.hpp"
#include "swathcube_tools/fixture.hpp"

namespace swathcube::tools {

namespace {

struct FixtureArgs {
  std::string output;
  std::size_t passes = 1;
  std::size_t cubes_per_pass = 2;
  std::size_t lines = 500;
  double spacing = 25;
  double heading = 0;
  double noise = 0;
  std::optional<double> roll, pitch, yaw;
  std::string scene = "checker";
  double period = 2;
  double low = 100, high = 1000;
  std::string data_type = "u16";
  bool calibration = false;
  bool no_fov = false;
};

void configure(CLI::App& app, FixtureArgs& a, oracle::FlightPlan& p) {
  app.add_option("--output", a.output, "directory to write into")->required();
  app.add_option("--passes", a.passes, "parallel flight lines")->check(CLI::PositiveNumber);
  app.add_option("--cubes-per-pass", a.cubes_per_pass, "chained cubes per flight line")->check(CLI::PositiveNumber);
  app.add_option("--lines", a.lines, "lines per cube")->check(CLI::PositiveNumber);
  app.add_option("--samples", p.camera.samples, "samples per line")->check(CLI::Range(2, 100000));
  app.add_option("--bands", p.camera.bands, "spectral bands")->check(CLI::PositiveNumber);
  app.add_option("--first-wavelength", p.camera.first_wavelength, "nm");
  app.add_option("--last-wavelength", p.camera.last_wavelength, "nm");
  app.add_option("--fov-deg", p.camera.fov_deg, "true field of view in degrees");
  app.add_option("--framerate", p.camera.framerate, "lines per second");
  app.add_option("--spacing", a.spacing, "meters between flight lines");
  app.add_option("--heading", a.heading, "grid heading of the first line in degrees");
  app.add_option("--speed", p.speed, "m/s");
  app.add_option("--agl", p.agl, "flying height above ground in meters");
  app.add_option("--ground-altitude", p.ground_altitude, "ground height above the ellipsoid");
  app.add_option("--zone", p.zone, "UTM zone of the anchor")->check(CLI::Range(1, 60));
  app.add_option("--noise", a.noise, "attitude jitter amplitude in degrees on every axis");
  app.add_option("--roll-noise", a.roll, "overrides --noise for roll");
  app.add_option("--pitch-noise", a.pitch, "overrides --noise for pitch");
  app.add_option("--yaw-noise", a.yaw, "overrides --noise for yaw");
  app.add_option("--altitude-noise", p.altitude_noise_m, "height jitter in meters");
  app.add_option("--tau", p.noise_tau_s, "jitter time constant in seconds");
  app.add_option("--seed", p.seed, "jitter seed");
  app.add_option("--scene", a.scene, "constant, stripes, checker, waves or gradient")
      ->check(CLI::IsMember({"constant", "stripes", "checker", "waves", "gradient"}));
  app.add_option("--period", a.period, "scene feature size in meters");
  app.add_option("--low", a.low, "scene minimum");
  app.add_option("--high", a.high, "scene maximum");
  app.add_option("--data-type", a.data_type, "u8, i16, u16 or f32")
      ->check(CLI::IsMember({"u8", "i16", "u16", "f32"}));
  app.add_flag("--calibration", a.calibration, "write a calibration cube and encode DN through it");
  app.add_flag("--no-fov", a.no_fov, "omit the field of view from cube headers");
}

oracle::Scene make_scene(const FixtureArgs& a) {
  if (a.scene == "constant") return oracle::Scene::constant(a.high);
  if (a.scene == "stripes") return oracle::Scene::stripes(a.period, 0, a.low, a.high);
  if (a.scene == "waves") return oracle::Scene::waves(a.period, (a.low + a.high) / 2, (a.high - a.low) / 2);
  if (a.scene == "gradient") return oracle::Scene::gradient((a.high - a.low) / 100, 0, a.low);
  return oracle::Scene::checker(a.period, a.low, a.high);
}

DataType data_type(const std::string& name) {
  if (name == "u8") return DataType::u8;
  if (name == "i16") return DataType::i16;
  if (name == "f32") return DataType::f32;
  return DataType::u16;
}

}  // namespace

FixtureConfig fixture_config(const std::vector<std::string>& args) {
  CLI::App app{"Simulate a pushbroom survey"};
  FixtureArgs a;
  FixtureConfig c;
  configure(app, a, c.plan);
  parse_args(app, args);

  auto& p = c.plan;
  p.roll_noise_deg = a.roll.value_or(a.noise);
  p.pitch_noise_deg = a.pitch.value_or(a.noise);
  p.yaw_noise_deg = a.yaw.value_or(a.noise);
  if (!(p.camera.last_wavelength > p.camera.first_wavelength))
    throw ConfigError({"--last-wavelength must exceed --first-wavelength"});
  if (!(p.agl > 0) || !(p.speed > 0)) throw ConfigError({"--agl and --speed must be positive"});

  const double length = p.speed * static_cast<double>(a.cubes_per_pass * a.lines) / p.camera.framerate;
  const double h = a.heading * std::numbers::pi / 180;
  const double along_n = std::cos(h), along_e = std::sin(h);
  const double across_n = -along_e, across_e = along_n;
  for (std::size_t k = 0; k < a.passes; ++k) {
    const double offset = static_cast<double>(k) * a.spacing;
    const bool forward = k % 2 == 0;
    const double start = forward ? 0.0 : length;
    p.legs.push_back({start * along_n + offset * across_n, start * along_e + offset * across_e,
                      forward ? a.heading : a.heading + 180, a.cubes_per_pass, a.lines});
  }

  c.options.scene = make_scene(a);
  c.options.data_type = data_type(a.data_type);
  c.options.write_fov = !a.no_fov;
  if (a.calibration) {
    c.calibration = oracle::make_calibration(p.camera.bands, p.camera.samples,
                                             {p.camera.framerate, p.camera.exposure_time, p.camera.gain},
                                             p.seed);
  }
  c.output = a.output;
  return c;
}

int fixture_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  log::init_from_env();
  try {
    FixtureConfig c = fixture_config(args);
    if (c.calibration) c.options.calibration = &*c.calibration;
    std::filesystem::create_directories(c.output);
    const oracle::Trajectory traj(c.plan);
    const auto files = oracle::write_capture(c.output, traj, c.options);
    out << "cubes=" << files.cube_list.string() << "\nposes=" << files.poses.string() << "\n";
    if (files.calibration) out << "calib=" << files.calibration->string() << "\n";
    out << "ground=" << c.plan.ground_altitude << "\ngsd=" << traj.nominal_gsd()
        << "\ncapture_seconds=" << traj.capture_seconds() << "\n";
    return 0;
  } catch (const CLI::CallForHelp&) {
    CLI::App app{"Simulate a pushbroom survey", "swathcube-fixture"};
    FixtureArgs a;
    oracle::FlightPlan p;
    configure(app, a, p);
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) err << "error: " << p << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace swathcube::tools
