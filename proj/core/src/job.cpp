#include "swathcube/job.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "swathcube/error.hpp"
#include "swathcube/log.hpp"
#include "swathcube/parallel.hpp"

namespace swathcube {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

fs::path resolve(std::string_view value, const fs::path& base) {
  fs::path p{std::string(trim(value))};
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

std::string read_text(const fs::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + std::string(what) + " " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void apply_setting(JobConfig& c, std::string_view key, std::string_view value, const fs::path& base) {
  key = trim(key);
  value = trim(value);
  auto bad = [&](const std::string& why) {
    throw ConfigError({"'" + std::string(key) + " = " + std::string(value) + "': " + why});
  };
  if (key == "cubes") {
    c.cubes = resolve(value, base);
  } else if (key == "poses") {
    c.poses = resolve(value, base);
  } else if (key == "calib") {
    c.calibration = resolve(value, base);
  } else if (key == "illumination") {
    c.illumination = resolve(value, base);
  } else if (key == "wavelengths") {
    c.wavelengths.clear();
    c.all_wavelengths = value == "all";
    if (!c.all_wavelengths) {
      std::size_t start = 0;
      while (start <= value.size()) {
        auto comma = value.find(',', start);
        if (comma == std::string_view::npos) comma = value.size();
        const auto w = parse_number<double>(value.substr(start, comma - start));
        if (!w || !(*w > 0)) bad("expected 'all' or a comma-separated list of wavelengths in nm");
        c.wavelengths.push_back(*w);
        start = comma + 1;
      }
    }
  } else if (key == "gsd") {
    const auto v = parse_number<double>(value);
    if (!v) bad("not a number");
    c.gsd = *v;
  } else if (key == "ground") {
    if (value == "auto") {
      c.ground.reset();
    } else {
      const auto v = parse_number<double>(value);
      if (!v) bad("expected 'auto' or meters");
      c.ground = *v;
    }
  } else if (key == "ground-agl") {
    const auto v = parse_number<double>(value);
    if (!v) bad("not a number");
    c.ground_agl = *v;
  } else if (key == "range") {
    const auto colon = value.find(':');
    if (colon == std::string_view::npos) bad("expected <first>:<last>");
    const auto a = parse_number<std::size_t>(value.substr(0, colon));
    const auto b = parse_number<std::size_t>(value.substr(colon + 1));
    if (!a || !b) bad("expected <first>:<last> cube indices");
    c.range_first = *a;
    c.range_last = *b;
  } else if (key == "mode") {
    const auto m = parse_processing_mode(value);
    if (!m) bad("expected raw, relative, radiance or reflectance");
    c.mode = *m;
  } else if (key == "output") {
    c.output = resolve(value, base);
  } else if (key == "jobs") {
    const auto v = parse_number<unsigned>(value);
    if (!v) bad("not a count");
    c.jobs = *v;
  } else if (key == "no-data") {
    const auto v = parse_number<float>(value);
    if (!v) bad("not a number");
    c.no_data = *v;
  } else if (key == "fov") {
    const auto v = parse_number<double>(value);
    if (!v) bad("not a number");
    c.fov = *v;
  } else if (key == "mask") {
    if (value == "true" || value == "1" || value == "yes") {
      c.mask = true;
    } else if (value == "false" || value == "0" || value == "no") {
      c.mask = false;
    } else {
      bad("expected true or false");
    }
  } else {
    throw ConfigError({"unknown setting '" + std::string(key) + "'"});
  }
}

JobConfig parse_config(std::string_view text, const fs::path& base_dir, std::string_view source) {
  JobConfig c;
  std::vector<std::string> problems;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++row;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(row) + ": ";
    if (eq == std::string_view::npos) {
      problems.push_back(where + "expected key = value");
      continue;
    }
    try {
      apply_setting(c, line.substr(0, eq), line.substr(eq + 1), base_dir);
    } catch (const ConfigError& e) {
      for (const auto& p : e.problems()) problems.push_back(where + p);
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

JobConfig read_config(const fs::path& path) {
  return parse_config(read_text(path, "config"), path.parent_path(), path.string());
}

std::vector<fs::path> read_cube_list(const fs::path& path) {
  const std::string text = read_text(path, "cube list");
  std::vector<fs::path> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(resolve(t, path.parent_path()));
  }
  return out;
}

ValidatedJob validate_config(const JobConfig& config) {
  ValidatedJob v;
  v.config = config;
  std::vector<std::string> problems;
  if (v.config.jobs == 0) v.config.jobs = default_jobs();

  if (config.cubes.empty()) {
    problems.push_back("no cube list given (--cubes)");
  } else {
    try {
      v.cubes = read_cube_list(config.cubes);
      if (v.cubes.empty()) problems.push_back("cube list " + config.cubes.string() + " is empty");
      for (const auto& c : v.cubes) {
        if (!fs::exists(header_path_for(c))) problems.push_back("cube header " + header_path_for(c).string() + " not found");
      }
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }
  if (config.poses.empty()) {
    problems.push_back("no pose log given (--poses)");
  } else if (!fs::exists(config.poses)) {
    problems.push_back("pose log " + config.poses.string() + " not found");
  }
  if (config.calibration && !fs::exists(header_path_for(*config.calibration)))
    problems.push_back("calibration " + config.calibration->string() + " not found");
  if (config.illumination && !fs::exists(*config.illumination))
    problems.push_back("illumination spectrum " + config.illumination->string() + " not found");
  if ((config.mode == ProcessingMode::radiance || config.mode == ProcessingMode::reflectance) &&
      !config.calibration)
    problems.push_back(std::string(to_string(config.mode)) + " mode needs a calibration file (--calib)");
  if (config.mode == ProcessingMode::reflectance && !config.illumination)
    problems.push_back("reflectance mode needs an illumination spectrum (--illumination)");
  if (!(config.gsd > 0)) problems.push_back("gsd must be positive");
  if (config.wavelengths.empty() && !config.all_wavelengths)
    problems.push_back("no wavelengths given (--wavelengths)");
  if (config.range_first && config.range_last && *config.range_first > *config.range_last)
    problems.push_back("cube range " + std::to_string(*config.range_first) + ":" +
                       std::to_string(*config.range_last) + " is reversed");
  if (config.range_last && !v.cubes.empty() && *config.range_last >= v.cubes.size())
    problems.push_back("cube range ends at " + std::to_string(*config.range_last) + " but there are only " +
                       std::to_string(v.cubes.size()) + " cubes");
  if (config.output.empty()) problems.push_back("no output path given (--output)");
  if (config.fov && !(*config.fov > 0 && *config.fov < 180)) problems.push_back("fov must be in (0, 180) degrees");

  if (!v.cubes.empty() && fs::exists(header_path_for(v.cubes.front())) && !config.wavelengths.empty()) {
    try {
      const CubeHeader h = read_header(v.cubes.front());
      if (!h.wavelengths.empty()) {
        for (double w : config.wavelengths) {
          if (w < h.wavelengths.front() || w > h.wavelengths.back()) {
            const std::size_t b = nearest_band(h.wavelengths, w);
            std::ostringstream msg;
            msg << "wavelength " << w << " nm is outside the sensor range [" << h.wavelengths.front() << ", "
                << h.wavelengths.back() << "] nm; using band " << b << " (" << h.wavelengths[b] << " nm)";
            v.warnings.push_back(msg.str());
          }
        }
      } else {
        problems.push_back("cubes carry no wavelengths; use --wavelengths all");
      }
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return v;
}

JobReport run_export(const JobConfig& config, std::ostream& report) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const ValidatedJob job = validate_config(config);
  for (const auto& w : job.warnings) log::warn(w);

  auto t = Clock::now();
  CollectionOptions opts;
  opts.cubes = job.cubes;
  opts.poses = config.poses;
  opts.calibration = config.calibration;
  opts.illumination = config.illumination;
  opts.ground_height = config.ground;
  opts.nominal_agl = config.ground_agl;
  opts.fov_deg = config.fov;
  const Collection collection(std::move(opts));
  const double open_ms = std::chrono::duration<double, std::milli>(Clock::now() - t).count();

  JobReport out;
  out.ground_height = collection.default_ground_height();
  if (config.all_wavelengths) {
    for (std::size_t b = 0; b < collection.bands(); ++b) out.bands.push_back(b);
  } else {
    for (double w : config.wavelengths) out.bands.push_back(nearest_band(collection.wavelengths(), w));
  }

  ExportRequest req;
  req.bands = out.bands;
  req.gsd = config.gsd;
  req.mode = config.mode;
  req.first_cube = config.range_first.value_or(0);
  req.last_cube = config.range_last.value_or(collection.size() - 1);
  req.no_data = config.no_data;
  req.mask = config.mask;
  req.output = config.output;
  req.jobs = job.config.jobs;
  out.result = export_cube(collection, req);

  const CubeHeader written = read_header(out.result.header);
  if (written.bands != out.result.bands || written.samples != out.result.grid.width ||
      written.lines != out.result.grid.height)
    throw IoError("written cube " + out.result.header.string() + " does not validate");

  out.total_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  const auto& s = out.result.times;
  report << "stage=load wall_ms=" << (open_ms + s.load) << "\n";
  report << "stage=mesh wall_ms=" << s.mesh << "\n";
  report << "stage=render wall_ms=" << s.render << "\n";
  report << "stage=write wall_ms=" << s.write << "\n";
  report << "stage=total wall_ms=" << out.total_ms << "\n";
  return out;
}

}  // namespace swathcube
