#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "swathcube/service/session.hpp"

namespace httplib {
class Server;
}

namespace swathcube::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path export_dir = ".";  // relative export outputs land here
  std::optional<std::filesystem::path> static_dir;  // served at /
};

/// JSON/PNG endpoints under /api for one session:
///   GET  /api/metadata
///   GET  /api/tile/{z}/{tx}/{ty}?gen=<n>
///   GET  /api/params, POST /api/params
///   GET  /api/histogram?viewport=<center_n>,<center_e>,<scale_n>,<scale_e>,<w>,<h>
///   POST /api/export, GET /api/export/{id}
///   GET  /api/events  (text/event-stream)
class HttpServer {
 public:
  HttpServer(Session& session, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and serves on a background thread; returns the bound port.
  int start();
  /// Serves on the calling thread until stop().
  void run();
  void stop();
  int port() const noexcept { return port_; }

 private:
  void install_routes();

  Session& session_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

/// Metadata document served at /api/metadata.
std::string metadata_json(const Session& session);

/// Parses a /api/params body into an update; throws ConfigError.
ParamsUpdate parse_params_json(const std::string& body);

/// Parses the histogram viewport query value.
ViewWindow parse_viewport(const std::string& text);

}  // namespace swathcube::service
