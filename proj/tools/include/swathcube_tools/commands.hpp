#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <swathcube/collection.hpp>
#include <swathcube/job.hpp>
#include <swathcube/service/http_server.hpp>
#include <swathcube/service/session.hpp>

namespace swathcube::tools {

/// Builds the export job from rasterizer arguments (program name excluded).
/// A --config file is applied first and flags override it. Throws
/// ConfigError, or CLI::ParseError for malformed flags.
JobConfig rasterize_config(const std::vector<std::string>& args);

/// Runs an export; writes the stage timing report to `out` and problems to
/// `err`. Returns 0 only when the output cube was written and re-read.
int rasterize_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ViewConfig {
  CollectionOptions collection;
  service::SessionOptions session;
  service::ServerOptions server;
};

ViewConfig view_config(const std::vector<std::string>& args);

/// Serves the viewer endpoints until SIGINT or SIGTERM.
int view_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swathcube::tools
