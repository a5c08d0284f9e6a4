#include "swathcube/service/http_server.hpp"

#include <atomic>
#include <charconv>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "swathcube/error.hpp"
#include "swathcube/log.hpp"
#include "swathcube/service/png.hpp"

namespace swathcube::service {

using nlohmann::json;

namespace {

json bounds_json(const Bounds& b) {
  return {{"min_north", b.min_north}, {"max_north", b.max_north}, {"min_east", b.min_east}, {"max_east", b.max_east}};
}

json params_json(const ViewParams& p, std::uint64_t generation) {
  return {{"wavelengths", p.wavelengths},
          {"mode", std::string(to_string(p.mode))},
          {"stretch", std::string(to_string(p.stretch))},
          {"ground_height", p.ground_height},
          {"range", {p.first_cube, p.last_cube}},
          {"generation", generation}};
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, json{{"error", message}}, status);
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::string metadata_json(const Session& session) {
  const Collection& c = session.collection();
  const ViewParams p = session.params();
  const auto selected = session.selected_bands();
  json cubes = json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const CubeHeader& h = c.header(i);
    json bands = json::object();
    for (std::size_t b : selected) bands[std::to_string(b)] = std::string(to_string(session.band_status(i, b)));
    cubes.push_back({{"index", i},
                     {"name", c.name(i)},
                     {"samples", h.samples},
                     {"lines", h.lines},
                     {"bands", h.bands},
                     {"chained", c.chained(i)},
                     {"status", std::string(to_string(session.cube_status(i)))},
                     {"band_status", bands},
                     {"bounds", bounds_json(mesh_bounds(c.meshes()->meshes[i]))}});
  }
  const auto& f = c.frame();
  const Pyramid& py = session.pyramid();
  json doc = {
      {"frame",
       {{"zone", f.origin.zone},
        {"hemisphere", geodesy::to_string(f.origin.hemisphere)},
        {"origin_easting", f.origin.easting},
        {"origin_northing", f.origin.northing},
        {"origin_altitude", f.origin_altitude},
        {"convergence_deg", f.convergence_deg}}},
      {"bounds", bounds_json(c.meshes()->bounds())},
      {"pyramid",
       {{"origin_north", py.origin_north},
        {"origin_east", py.origin_east},
        {"extent", py.extent},
        {"tile_size", kTileSize},
        {"max_zoom", py.max_zoom}}},
      {"ground", {{"estimate", c.ground_estimate()}, {"current", p.ground_height}}},
      {"wavelengths", c.wavelengths()},
      {"samples", c.samples()},
      {"bands", c.bands()},
      {"fov_deg", c.fov_deg()},
      {"calibrated", c.calibration() != nullptr},
      {"illumination", c.illumination() != nullptr},
      {"cubes", cubes},
      {"params", params_json(p, session.generation())}};
  return doc.dump();
}

ParamsUpdate parse_params_json(const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }
  if (!j.is_object()) throw ConfigError({"params must be a JSON object"});
  ParamsUpdate u;
  std::vector<std::string> problems;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    try {
      if (k == "wavelengths") {
        u.wavelengths = v.get<std::vector<double>>();
      } else if (k == "mode") {
        u.mode = parse_processing_mode(v.get<std::string>());
        if (!u.mode) problems.push_back("unknown mode " + v.dump());
      } else if (k == "stretch") {
        u.stretch = parse_stretch_mode(v.get<std::string>());
        if (!u.stretch) problems.push_back("unknown stretch " + v.dump());
      } else if (k == "ground_height") {
        u.ground_height = v.get<double>();
      } else if (k == "range") {
        const auto r = v.get<std::vector<std::int64_t>>();
        if (r.size() != 2 || r[0] < 0 || r[1] < 0) {
          problems.push_back("range must be [first, last]");
        } else {
          u.first_cube = static_cast<std::size_t>(r[0]);
          u.last_cube = static_cast<std::size_t>(r[1]);
        }
      } else {
        problems.push_back("unknown parameter '" + k + "'");
      }
    } catch (const json::exception&) {
      problems.push_back("parameter '" + k + "' has the wrong type");
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return u;
}

ViewWindow parse_viewport(const std::string& text) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    double x = 0;
    auto [p, ec] = std::from_chars(text.data() + start, text.data() + comma, x);
    if (ec != std::errc() || p != text.data() + comma) throw ConfigError({"viewport values must be numbers"});
    v.push_back(x);
    start = comma + 1;
  }
  if (v.size() != 6) throw ConfigError({"viewport is center_n,center_e,scale_n,scale_e,width,height"});
  if (!(v[2] > 0) || !(v[3] > 0) || !(v[4] >= 1) || !(v[5] >= 1) || v[4] != std::floor(v[4]) ||
      v[5] != std::floor(v[5]))
    throw ConfigError({"viewport needs positive scales and integer pixel sizes"});
  ViewWindow w;
  w.center_north = v[0];
  w.center_east = v[1];
  w.scale_north = v[2];
  w.scale_east = v[3];
  w.width = static_cast<std::size_t>(v[4]);
  w.height = static_cast<std::size_t>(v[5]);
  return w;
}

HttpServer::HttpServer(Session& session, ServerOptions options)
    : session_(session), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
  auto& s = *server_;
  Session& session = session_;

  s.Get("/api/metadata", [&session](const httplib::Request&, httplib::Response& res) {
    res.set_content(metadata_json(session), "application/json");
  });

  s.Get("/api/params", [&session](const httplib::Request&, httplib::Response& res) {
    send_json(res, params_json(session.params(), session.generation()));
  });

  s.Post("/api/params", [&session](const httplib::Request& req, httplib::Response& res) {
    try {
      const std::uint64_t gen = session.set_params(parse_params_json(req.body));
      send_json(res, params_json(session.params(), gen));
    } catch (const ConfigError& e) {
      send_json(res, json{{"error", e.what()}, {"problems", e.problems()}}, 400);
    }
  });

  s.Get(R"(/api/tile/(\d+)/(\d+)/(\d+))", [&session](const httplib::Request& req, httplib::Response& res) {
    const auto z = parse_u64(req.matches[1]);
    const auto tx = parse_u64(req.matches[2]);
    const auto ty = parse_u64(req.matches[3]);
    if (!z || !tx || !ty || *z > 64) return send_error(res, 400, "bad tile key");
    TileKey key{static_cast<int>(*z), static_cast<std::int64_t>(*tx), static_cast<std::int64_t>(*ty)};
    if (!session.pyramid().contains(key)) return send_error(res, 404, "tile outside the pyramid");
    std::optional<std::uint64_t> gen;
    if (req.has_param("gen")) {
      gen = parse_u64(req.get_param_value("gen"));
      if (!gen) return send_error(res, 400, "gen must be an integer");
      if (*gen > session.generation()) return send_error(res, 400, "unknown generation");
    }
    try {
      const auto tile = session.tile(key, gen);
      const std::string png = encode_png_rgba(tile->rgba, kTileSize, kTileSize);
      const std::size_t total = kTileSize * kTileSize;
      res.set_header("X-Coverage", "covered=" + std::to_string(tile->covered) + "; pending=" +
                                       std::to_string(tile->pending) + "; none=" +
                                       std::to_string(total - tile->covered - tile->pending));
      res.set_header("X-Generation", std::to_string(tile->generation));
      res.set_header("Cache-Control", "no-store");
      res.set_content(png, "image/png");
    } catch (const CancelledError&) {
      send_json(res, json{{"error", "superseded"}, {"generation", session.generation()}}, 409);
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  });

  s.Get("/api/histogram", [&session](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("viewport")) return send_error(res, 400, "missing viewport");
    try {
      const ViewWindow view = parse_viewport(req.get_param_value("viewport"));
      const HistogramResult h = session.histogram(view);
      json channels = json::array();
      for (const auto& ch : h.channels) {
        channels.push_back({{"low", ch.low()},
                            {"high", ch.high()},
                            {"total", ch.total()},
                            {"counts", ch.empty() ? json::array() : json(ch.counts())}});
      }
      json doc = {{"bins", Histogram::kBins}, {"channels", channels}, {"generation", session.generation()}};
      if (h.bounds) doc["bounds"] = {{"low", h.bounds->low}, {"high", h.bounds->high}};
      send_json(res, doc);
    } catch (const ConfigError& e) {
      send_error(res, 400, e.what());
    } catch (const std::exception& e) {
      send_error(res, 400, e.what());
    }
  });

  s.Post("/api/export", [this, &session](const httplib::Request& req, httplib::Response& res) {
    try {
      json j = json::parse(req.body);
      const Collection& c = session.collection();
      ExportRequest er;
      const ViewParams p = session.params();
      er.mode = p.mode;
      er.first_cube = p.first_cube;
      er.last_cube = p.last_cube;
      er.ground_height = p.ground_height;
      std::vector<std::string> problems;
      if (!j.contains("wavelengths") || !j.contains("gsd") || !j.contains("output"))
        throw ConfigError({"export needs wavelengths, gsd and output"});
      if (j["wavelengths"].is_string() && j["wavelengths"] == "all") {
        for (std::size_t b = 0; b < c.bands(); ++b) er.bands.push_back(b);
      } else {
        for (double w : j["wavelengths"].get<std::vector<double>>()) er.bands.push_back(nearest_band(c.wavelengths(), w));
      }
      er.gsd = j["gsd"].get<double>();
      if (!(er.gsd > 0)) problems.push_back("gsd must be positive");
      std::filesystem::path out = j["output"].get<std::string>();
      if (out.is_relative()) out = options_.export_dir / out;
      er.output = out;
      if (j.contains("mode")) {
        const auto m = parse_processing_mode(j["mode"].get<std::string>());
        if (!m) {
          problems.push_back("unknown mode");
        } else {
          er.mode = *m;
        }
      }
      if (j.contains("range")) {
        const auto r = j["range"].get<std::vector<std::size_t>>();
        if (r.size() != 2 || r[0] > r[1] || r[1] >= c.size()) {
          problems.push_back("bad cube range");
        } else {
          er.first_cube = r[0];
          er.last_cube = r[1];
        }
      }
      if (j.contains("ground_height")) er.ground_height = j["ground_height"].get<double>();
      if (j.contains("mask")) er.mask = j["mask"].get<bool>();
      if (j.contains("no_data")) er.no_data = j["no_data"].get<float>();
      try {
        c.check_mode(er.mode);
      } catch (const ConfigError& e) {
        problems.insert(problems.end(), e.problems().begin(), e.problems().end());
      }
      if (!problems.empty()) throw ConfigError(problems);
      const std::uint64_t id = session.submit_export(std::move(er));
      send_json(res, json{{"id", id}, {"state", "queued"}}, 202);
    } catch (const ConfigError& e) {
      send_json(res, json{{"error", e.what()}, {"problems", e.problems()}}, 400);
    } catch (const std::exception& e) {
      send_error(res, 400, e.what());
    }
  });

  s.Get(R"(/api/export/(\d+))", [&session](const httplib::Request& req, httplib::Response& res) {
    const auto id = parse_u64(req.matches[1]);
    const auto st = id ? session.export_status(*id) : std::nullopt;
    if (!st) return send_error(res, 404, "no such export job");
    send_json(res, json{{"id", st->id},
                        {"state", std::string(to_string(st->state))},
                        {"done", st->bands_done},
                        {"total", st->bands_total},
                        {"message", st->message},
                        {"output", st->output}});
  });

  s.Get("/api/events", [this, &session](const httplib::Request& req, httplib::Response& res) {
    std::uint64_t after = 0;
    if (req.has_param("after")) after = parse_u64(req.get_param_value("after")).value_or(0);
    if (req.has_header("Last-Event-ID")) after = parse_u64(req.get_header_value("Last-Event-ID")).value_or(after);
    auto cursor = std::make_shared<std::uint64_t>(after);
    res.set_header("Cache-Control", "no-store");
    res.set_chunked_content_provider("text/event-stream", [this, &session, cursor](std::size_t, httplib::DataSink& sink) {
      if (!server_->is_running()) return false;
      const auto events = session.events_after(*cursor, std::chrono::milliseconds(500));
      std::string chunk;
      for (const auto& e : events) {
        chunk += "id: " + std::to_string(e.seq) + "\nevent: " + e.type + "\ndata: " + e.data + "\n\n";
        *cursor = e.seq;
      }
      if (chunk.empty()) chunk = ": keep-alive\n\n";
      return sink.write(chunk.data(), chunk.size());
    });
  });

  if (options_.static_dir) s.set_mount_point("/", options_.static_dir->string());

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    } catch (...) {
      send_error(res, 500, "internal error");
    }
  });
}

int HttpServer::start() {
  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
  } else {
    port_ = server_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ < 0) throw IoError("cannot bind " + options_.host + ":" + std::to_string(options_.port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void HttpServer::run() {
  if (!server_->listen(options_.host, options_.port)) throw IoError("cannot listen on " + options_.host);
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace swathcube::service
