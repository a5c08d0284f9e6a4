#include "swathcube/log.hpp"

#include <spdlog/spdlog.h>

#include <cstdlib>
#include <string>

namespace swathcube::log {

void set_level(std::string_view level) {
  auto parsed = spdlog::level::from_str(std::string(level));
  // from_str maps unknown names to off; only accept names it really knows.
  if (parsed == spdlog::level::off && level != "off") return;
  spdlog::set_level(parsed);
}

void init_from_env() {
  if (const char* env = std::getenv("SWATHCUBE_LOG"); env != nullptr) set_level(env);
}

void debug(std::string_view message) { spdlog::debug("{}", message); }
void info(std::string_view message) { spdlog::info("{}", message); }
void warn(std::string_view message) { spdlog::warn("{}", message); }
void error(std::string_view message) { spdlog::error("{}", message); }

}  // namespace swathcube::log
