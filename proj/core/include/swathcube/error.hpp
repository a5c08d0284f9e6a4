#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace swathcube {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain of a projection or coordinate transform.
class GeodesyError : public Error {
 public:
  using Error::Error;
};

/// Malformed header, pose log, calibration or config text.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A camera ray that never reaches the ground plane.
class GeometryError : public Error {
 public:
  GeometryError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Pose interpolation asked to extrapolate outside the pose log.
class PoseRangeError : public Error {
 public:
  PoseRangeError(const std::string& what, std::string cube, std::size_t line)
      : Error(what), cube_(std::move(cube)), line_(line) {}
  const std::string& cube() const noexcept { return cube_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string cube_;
  std::size_t line_;
};

class RenderError : public Error {
 public:
  using Error::Error;
};

/// A render that observed its cancellation flag.
class CancelledError : public Error {
 public:
  CancelledError() : Error("render cancelled") {}
};

/// Aggregated configuration problems, reported all at once.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

inline std::string join_problems(const std::vector<std::string>& problems) {
  std::string out;
  for (const auto& p : problems) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

inline ConfigError::ConfigError(std::vector<std::string> problems)
    : Error("invalid configuration: " + join_problems(problems)),
      problems_(std::move(problems)) {}

}  // namespace swathcube
