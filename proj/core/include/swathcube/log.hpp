#pragma once

#include <string_view>

namespace swathcube::log {

/// Reads SWATHCUBE_LOG (trace, debug, info, warn, error, off) and sets the
/// global level. Unset or unknown values keep the default (info).
void init_from_env();

void set_level(std::string_view level);

void debug(std::string_view message);
void info(std::string_view message);
void warn(std::string_view message);
void error(std::string_view message);

}  // namespace swathcube::log
