#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "swathcube/pose.hpp"

namespace swathcube {

/// Pose log CSV: header `timestamp,lat,lon,alt,roll,pitch,yaw` (any column
/// order), angles in degrees, ZYX Euler. Timestamps must be strictly
/// increasing; errors name the offending row.
std::vector<InsRecord> parse_pose_log(std::string_view text, std::string_view source = "pose log");
std::vector<InsRecord> read_pose_log(const std::filesystem::path& path);

void write_pose_log(const std::filesystem::path& path, std::span<const InsRecord> records);

}  // namespace swathcube
