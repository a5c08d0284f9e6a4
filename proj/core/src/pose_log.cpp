#include "swathcube/pose_log.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "swathcube/error.hpp"

namespace swathcube {

namespace {

constexpr std::array<std::string_view, 7> kColumns = {"timestamp", "lat", "lon", "alt",
                                                      "roll",      "pitch", "yaw"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::vector<InsRecord> parse_pose_log(std::string_view text, std::string_view source) {
  auto fail = [&](std::size_t row, const std::string& msg) -> void {
    throw FormatError(std::string(source) + ":" + std::to_string(row) + ": " + msg);
  };

  std::vector<InsRecord> records;
  std::array<std::size_t, kColumns.size()> index{};
  bool have_header = false;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = trim(text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++row;
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line);
    if (!have_header) {
      for (std::size_t c = 0; c < kColumns.size(); ++c) {
        bool found = false;
        for (std::size_t f = 0; f < fields.size(); ++f) {
          if (fields[f] == kColumns[c]) {
            index[c] = f;
            found = true;
          }
        }
        if (!found) fail(row, "missing column '" + std::string(kColumns[c]) + "'");
      }
      have_header = true;
      continue;
    }
    std::array<double, kColumns.size()> v{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      if (index[c] >= fields.size()) fail(row, "missing value for column '" + std::string(kColumns[c]) + "'");
      const auto f = fields[index[c]];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v[c]);
      if (ec != std::errc() || ptr != f.data() + f.size() || f.empty())
        fail(row, "bad number '" + std::string(f) + "' in column '" + std::string(kColumns[c]) + "'");
    }
    InsRecord r;
    r.timestamp = v[0];
    r.position = {v[1], v[2], v[3]};
    r.roll = v[4];
    r.pitch = v[5];
    r.yaw = v[6];
    if (!records.empty()) {
      if (r.timestamp == records.back().timestamp) fail(row, "duplicated timestamp " + std::string(fields[index[0]]));
      if (r.timestamp < records.back().timestamp) fail(row, "timestamp goes backwards");
    }
    records.push_back(r);
  }
  if (!have_header) fail(1, "empty pose log");
  if (records.empty()) fail(row, "pose log has a header but no records");
  return records;
}

std::vector<InsRecord> read_pose_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pose log " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pose_log(ss.str(), path.string());
}

void write_pose_log(const std::filesystem::path& path, std::span<const InsRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write pose log " + path.string());
  out << "timestamp,lat,lon,alt,roll,pitch,yaw\n";
  char buf[64];
  auto put = [&](double v, char sep) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, p - buf);
    out.put(sep);
  };
  for (const auto& r : records) {
    put(r.timestamp, ',');
    put(r.position.latitude, ',');
    put(r.position.longitude, ',');
    put(r.position.altitude, ',');
    put(r.roll, ',');
    put(r.pitch, ',');
    put(r.yaw, '\n');
  }
  if (!out) throw IoError("write failed on " + path.string());
}

}  // namespace swathcube
