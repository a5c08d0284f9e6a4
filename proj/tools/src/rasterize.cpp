#include <filesystem>
#include <map>
#include <ostream>

#include <swathcube/error.hpp>
#include <swathcube/log.hpp>

#include "args.hpp"
#include "swathcube_tools/commands.hpp"

namespace swathcube::tools {

namespace {

struct Flag {
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"cubes", "cube list file, one header path per line in capture order"},
    {"poses", "INS pose log (CSV)"},
    {"calib", "calibration cube (dark and radiance coefficients)"},
    {"illumination", "illumination spectrum for reflectance mode"},
    {"wavelengths", "comma-separated wavelengths in nm, or 'all'"},
    {"gsd", "output ground sample distance in meters"},
    {"ground", "ground height in meters above the ellipsoid, or 'auto'"},
    {"ground-agl", "nominal flying height used by the 'auto' ground estimate"},
    {"range", "cube range <first>:<last>, 0-based and inclusive"},
    {"mode", "raw, relative, radiance or reflectance"},
    {"output", "output path without extension"},
    {"jobs", "worker threads (0: hardware parallelism)"},
    {"no-data", "value written to uncovered pixels"},
    {"fov", "field of view in degrees, overriding the cube headers"},
};

void configure(CLI::App& app, std::string& config_file, std::map<std::string, std::string>& values,
               bool& mask) {
  app.add_option("--config", config_file, "key = value job file; flags override its settings");
  for (const Flag& f : kFlags) app.add_option(std::string("--") + f.key, values[f.key], f.help);
  app.add_flag("--mask", mask, "also write a coverage mask cube");
}

}  // namespace

JobConfig rasterize_config(const std::vector<std::string>& args) {
  CLI::App app{"Georectify pushbroom cubes into one map-projected cube"};
  std::string config_file;
  std::map<std::string, std::string> values;
  bool mask = false;
  configure(app, config_file, values, mask);
  parse_args(app, args);

  JobConfig config = config_file.empty() ? JobConfig{} : read_config(config_file);
  std::vector<std::string> problems;
  for (const Flag& f : kFlags) {
    if (app.get_option(std::string("--") + f.key)->count() == 0) continue;
    try {
      apply_setting(config, f.key, values[f.key]);
    } catch (const ConfigError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  if (mask) config.mask = true;
  return config;
}

int rasterize_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  log::init_from_env();
  JobConfig config;
  try {
    config = rasterize_config(args);
  } catch (const CLI::CallForHelp&) {
    CLI::App app{"Georectify pushbroom cubes into one map-projected cube", "swathcube-rasterize"};
    std::string config_file;
    std::map<std::string, std::string> values;
    bool mask = false;
    configure(app, config_file, values, mask);
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) err << "error: " << p << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    const JobReport report = run_export(config, out);
    out << "output=" << report.result.header.string() << " bands=" << report.result.bands
        << " width=" << report.result.grid.width << " height=" << report.result.grid.height << "\n";
    return 0;
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) err << "error: " << p << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace swathcube::tools
