#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace swathcube::tools {

/// CLI11 consumes arguments from the back.
inline void parse_args(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);
}

}  // namespace swathcube::tools
