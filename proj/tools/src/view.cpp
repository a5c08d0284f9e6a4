#include <csignal>
#include <ostream>
#include <pthread.h>

#include <swathcube/error.hpp>
#include <swathcube/log.hpp>

#include "args.hpp"
#include "swathcube_tools/commands.hpp"

namespace swathcube::tools {

namespace {

struct ViewArgs {
  std::string cubes, poses, calib, illumination, ground = "auto", static_dir;
  double ground_agl = kDefaultNominalAgl;
  double fov = 0;
  std::size_t cache_mb = 256;
  int max_zoom = -1;
};

void configure(CLI::App& app, ViewArgs& a, ViewConfig& c) {
  app.add_option("--cubes", a.cubes, "cube list file")->required();
  app.add_option("--poses", a.poses, "INS pose log (CSV)")->required();
  app.add_option("--calib", a.calib, "calibration cube");
  app.add_option("--illumination", a.illumination, "illumination spectrum");
  app.add_option("--ground", a.ground, "ground height in meters, or 'auto'");
  app.add_option("--ground-agl", a.ground_agl, "nominal flying height for the 'auto' estimate");
  app.add_option("--fov", a.fov, "field of view in degrees, overriding the cube headers");
  app.add_option("--host", c.server.host, "bind address");
  app.add_option("--port", c.server.port, "port (0 picks a free one)");
  app.add_option("--export-dir", c.server.export_dir, "directory for relative export outputs");
  app.add_option("--static-dir", a.static_dir, "directory served at /");
  app.add_option("--cache-mb", a.cache_mb, "tile cache size");
  app.add_option("--loaders", c.session.loaders, "background band loader threads")->check(CLI::PositiveNumber);
  app.add_option("--max-zoom", a.max_zoom, "deepest pyramid level");
}

}  // namespace

ViewConfig view_config(const std::vector<std::string>& args) {
  CLI::App app{"Serve a collection to the browser viewer"};
  ViewArgs a;
  ViewConfig c;
  configure(app, a, c);
  parse_args(app, args);

  std::vector<std::string> problems;
  try {
    c.collection.cubes = read_cube_list(a.cubes);
  } catch (const std::exception& e) {
    problems.emplace_back(e.what());
  }
  c.collection.poses = a.poses;
  if (!a.calib.empty()) c.collection.calibration = a.calib;
  if (!a.illumination.empty()) c.collection.illumination = a.illumination;
  if (a.ground != "auto") {
    try {
      std::size_t used = 0;
      c.collection.ground_height = std::stod(a.ground, &used);
      if (used != a.ground.size()) throw std::invalid_argument(a.ground);
    } catch (const std::exception&) {
      problems.push_back("--ground: expected 'auto' or meters, got '" + a.ground + "'");
    }
  }
  c.collection.nominal_agl = a.ground_agl;
  if (a.fov != 0) c.collection.fov_deg = a.fov;
  if (!a.static_dir.empty()) c.server.static_dir = a.static_dir;
  c.session.cache_bytes = a.cache_mb << 20;
  if (a.max_zoom >= 0) c.session.max_zoom = a.max_zoom;
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

int view_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  log::init_from_env();
  ViewConfig config;
  try {
    config = view_config(args);
  } catch (const CLI::CallForHelp&) {
    CLI::App app{"Serve a collection to the browser viewer", "swathcube-view"};
    ViewArgs a;
    ViewConfig c;
    configure(app, a, c);
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

  // Worker threads inherit the blocked mask so the signals reach sigwait.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  try {
    auto collection = std::make_shared<Collection>(config.collection);
    service::Session session(collection, config.session);
    session.start();
    service::HttpServer server(session, config.server);
    const int port = server.start();
    out << "listening on http://" << config.server.host << ":" << port << "/" << std::endl;
    int received = 0;
    sigwait(&signals, &received);
    server.stop();
    session.shutdown();
    return 0;
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) err << "error: " << p << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace swathcube::tools
