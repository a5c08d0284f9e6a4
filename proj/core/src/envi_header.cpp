#include "swathcube/envi_header.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "swathcube/error.hpp"

namespace swathcube {

namespace fs = std::filesystem;

std::size_t bytes_per_sample(DataType type) {
  switch (type) {
    case DataType::u8:
      return 1;
    case DataType::i16:
    case DataType::u16:
      return 2;
    case DataType::f32:
      return 4;
  }
  return 0;
}

std::string_view to_string(Interleave interleave) {
  switch (interleave) {
    case Interleave::bsq:
      return "bsq";
    case Interleave::bil:
      return "bil";
    case Interleave::bip:
      return "bip";
  }
  return "bsq";
}

int native_byte_order() { return std::endian::native == std::endian::big ? 1 : 0; }

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Lowercase and collapse runs of whitespace so "Data  Type" == "data type".
std::string normalize_key(std::string_view key) {
  std::string out;
  bool space = false;
  for (char c : trim(key)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

struct Entry {
  std::string value;
  std::size_t line;
};

class Parser {
 public:
  Parser(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(std::size_t line, const std::string& msg) const {
    throw FormatError(std::string(source_) + ":" + std::to_string(line) + ": " + msg);
  }

  double to_double(const Entry& e, std::string_view text) const {
    std::string t = trim(text);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
      fail(e.line, "expected a number, got '" + t + "'");
    return v;
  }

  std::size_t to_count(const Entry& e) const {
    std::string t = trim(e.value);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
      fail(e.line, "expected a non-negative integer, got '" + t + "'");
    return v;
  }

  std::vector<std::string> to_list(const Entry& e) const {
    std::string t = trim(e.value);
    if (t.size() < 2 || t.front() != '{' || t.back() != '}') fail(e.line, "expected a {list}");
    std::vector<std::string> items;
    std::string body = t.substr(1, t.size() - 2);
    if (trim(body).empty()) return items;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(trim(item));
    return items;
  }

  std::vector<double> to_doubles(const Entry& e) const {
    std::vector<double> out;
    for (const auto& item : to_list(e)) out.push_back(to_double(e, item));
    return out;
  }

 private:
  std::string_view source_;
};

void format_double(std::ostream& os, double v) {
  // Shortest round-trip digits, in plain notation for ordinary magnitudes.
  char buf[400];
  const double a = std::abs(v);
  const bool plain = a == 0.0 || (a >= 1e-5 && a < 1e16);
  auto [ptr, ec] = plain ? std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed)
                         : std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, ptr - buf);
}

void format_list(std::ostream& os, const std::vector<double>& values) {
  os << "{";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != 0) os << (i % 8 == 0 ? ",\n " : ", ");
    format_double(os, values[i]);
  }
  os << "}";
}

}  // namespace

CubeHeader parse_header(std::string_view text, std::string_view source) {
  Parser parser(source);
  std::vector<std::string> lines;
  {
    std::string line;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, line)) lines.push_back(line);
  }
  if (lines.empty() || trim(lines[0]) != "ENVI") parser.fail(1, "missing ENVI magic on first line");

  std::vector<std::pair<std::string, Entry>> entries;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& raw = lines[i];
    if (trim(raw).empty() || trim(raw)[0] == ';') continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) parser.fail(i + 1, "expected 'key = value'");
    std::string key = normalize_key(std::string_view(raw).substr(0, eq));
    std::string value = trim(std::string_view(raw).substr(eq + 1));
    const std::size_t start_line = i + 1;
    if (!value.empty() && value.front() == '{') {
      while (value.find('}') == std::string::npos) {
        if (++i >= lines.size()) parser.fail(start_line, "unterminated '{' for key '" + key + "'");
        value += " " + trim(lines[i]);
      }
    }
    if (key.empty()) parser.fail(start_line, "empty key");
    entries.push_back({key, {value, start_line}});
  }

  auto find = [&](std::string_view key) -> const Entry* {
    for (const auto& [k, e] : entries)
      if (k == key) return &e;
    return nullptr;
  };
  const std::size_t end_line = lines.size();
  auto require = [&](std::string_view key) -> const Entry& {
    const Entry* e = find(key);
    if (e == nullptr) parser.fail(end_line, "missing required key '" + std::string(key) + "'");
    return *e;
  };

  CubeHeader h;
  h.samples = parser.to_count(require("samples"));
  h.lines = parser.to_count(require("lines"));
  h.bands = parser.to_count(require("bands"));
  if (h.samples == 0 || h.lines == 0 || h.bands == 0)
    parser.fail(require("samples").line, "samples, lines and bands must be positive");

  {
    const Entry& e = require("data type");
    const std::size_t code = parser.to_count(e);
    switch (code) {
      case 1:
      case 2:
      case 4:
      case 12:
        h.data_type = static_cast<DataType>(code);
        break;
      default:
        parser.fail(e.line, "unsupported data type " + std::to_string(code) +
                                " (supported: 1, 2, 4, 12)");
    }
  }
  {
    const Entry& e = require("interleave");
    const std::string v = lower(trim(e.value));
    if (v == "bsq") {
      h.interleave = Interleave::bsq;
    } else if (v == "bil") {
      h.interleave = Interleave::bil;
    } else if (v == "bip") {
      h.interleave = Interleave::bip;
    } else {
      parser.fail(e.line, "unknown interleave '" + v + "'");
    }
    if (h.interleave != Interleave::bsq) {
      spdlog::warn("{}: {} interleave is supported but band reads are strided and slow", source, v);
    }
  }
  {
    const Entry& e = require("byte order");
    const std::size_t v = parser.to_count(e);
    if (v > 1) parser.fail(e.line, "byte order must be 0 or 1");
    h.byte_order = static_cast<int>(v);
  }
  if (const Entry* e = find("header offset")) h.header_offset = parser.to_count(*e);

  if (const Entry* e = find("wavelength")) {
    h.wavelengths = parser.to_doubles(*e);
    if (h.wavelengths.size() != h.bands) {
      parser.fail(e->line, "wavelength list has " + std::to_string(h.wavelengths.size()) +
                               " entries but bands = " + std::to_string(h.bands));
    }
    for (std::size_t i = 1; i < h.wavelengths.size(); ++i) {
      if (!(h.wavelengths[i] > h.wavelengths[i - 1]))
        parser.fail(e->line, "wavelengths must be strictly increasing");
    }
  }

  if (const Entry* e = find("sc line times")) {
    h.line_times = parser.to_doubles(*e);
    if (h.line_times.size() != h.lines) {
      parser.fail(e->line, "sc line times has " + std::to_string(h.line_times.size()) +
                               " entries but lines = " + std::to_string(h.lines));
    }
  }
  {
    const Entry* fr = find("sc framerate");
    const Entry* ex = find("sc exposure");
    const Entry* gn = find("sc gain");
    if (fr != nullptr || ex != nullptr || gn != nullptr) {
      if (fr == nullptr || ex == nullptr)
        parser.fail((fr ? fr : ex ? ex : gn)->line, "sc framerate and sc exposure must be given together");
      CaptureSettings s;
      s.framerate = parser.to_double(*fr, fr->value);
      s.exposure_time = parser.to_double(*ex, ex->value);
      s.gain = gn ? parser.to_double(*gn, gn->value) : 1.0;
      if (!(s.framerate > 0) || !(s.exposure_time > 0) || !(s.gain > 0))
        parser.fail(fr->line, "capture settings must be positive");
      h.settings = s;
    }
  }
  if (const Entry* e = find("sc fov")) h.fov_deg = parser.to_double(*e, e->value);
  if (const Entry* e = find("data ignore value")) h.data_ignore_value = parser.to_double(*e, e->value);
  if (const Entry* e = find("description")) {
    std::string v = trim(e->value);
    if (v.size() >= 2 && v.front() == '{' && v.back() == '}') v = trim(v.substr(1, v.size() - 2));
    h.description = v;
  }

  if (const Entry* e = find("map info")) {
    const auto items = parser.to_list(*e);
    if (items.size() < 10 || lower(items[0]) != "utm")
      parser.fail(e->line, "map info must be {UTM, x, y, easting, northing, gx, gy, zone, North|South, WGS-84}");
    MapInfo m;
    m.ref_x = parser.to_double(*e, items[1]);
    m.ref_y = parser.to_double(*e, items[2]);
    m.easting = parser.to_double(*e, items[3]);
    m.northing = parser.to_double(*e, items[4]);
    m.pixel_size_x = parser.to_double(*e, items[5]);
    m.pixel_size_y = parser.to_double(*e, items[6]);
    m.zone = static_cast<int>(parser.to_double(*e, items[7]));
    const std::string hemi = lower(items[8]);
    if (hemi != "north" && hemi != "south") parser.fail(e->line, "map info hemisphere must be North or South");
    m.hemisphere = hemi == "north" ? geodesy::Hemisphere::north : geodesy::Hemisphere::south;
    h.map_info = m;
  }

  static const char* known[] = {"samples",       "lines",        "bands",         "data type",
                                "interleave",    "byte order",   "header offset", "wavelength",
                                "sc line times", "sc framerate", "sc exposure",   "sc gain",
                                "sc fov",        "map info",     "data ignore value",
                                "description",   "file type",    "wavelength units"};
  for (const auto& [k, e] : entries) {
    if (std::find(std::begin(known), std::end(known), k) == std::end(known))
      h.extra.emplace_back(k, e.value);
  }
  return h;
}

std::string format_header(const CubeHeader& h) {
  std::ostringstream os;
  os << "ENVI\n";
  if (h.description) os << "description = {" << *h.description << "}\n";
  os << "samples = " << h.samples << "\n";
  os << "lines = " << h.lines << "\n";
  os << "bands = " << h.bands << "\n";
  os << "header offset = " << h.header_offset << "\n";
  os << "file type = ENVI Standard\n";
  os << "data type = " << static_cast<int>(h.data_type) << "\n";
  os << "interleave = " << to_string(h.interleave) << "\n";
  os << "byte order = " << h.byte_order << "\n";
  if (h.map_info) {
    const auto& m = *h.map_info;
    os << "map info = {UTM, ";
    format_double(os, m.ref_x);
    os << ", ";
    format_double(os, m.ref_y);
    os << ", ";
    format_double(os, m.easting);
    os << ", ";
    format_double(os, m.northing);
    os << ", ";
    format_double(os, m.pixel_size_x);
    os << ", ";
    format_double(os, m.pixel_size_y);
    os << ", " << m.zone << ", " << (m.hemisphere == geodesy::Hemisphere::north ? "North" : "South")
       << ", WGS-84, units=Meters}\n";
  }
  if (h.data_ignore_value) {
    os << "data ignore value = ";
    format_double(os, *h.data_ignore_value);
    os << "\n";
  }
  if (!h.wavelengths.empty()) {
    os << "wavelength units = Nanometers\n";
    os << "wavelength = ";
    format_list(os, h.wavelengths);
    os << "\n";
  }
  if (h.settings) {
    os << "sc framerate = ";
    format_double(os, h.settings->framerate);
    os << "\nsc exposure = ";
    format_double(os, h.settings->exposure_time);
    os << "\nsc gain = ";
    format_double(os, h.settings->gain);
    os << "\n";
  }
  if (h.fov_deg) {
    os << "sc fov = ";
    format_double(os, *h.fov_deg);
    os << "\n";
  }
  if (!h.line_times.empty()) {
    os << "sc line times = ";
    format_list(os, h.line_times);
    os << "\n";
  }
  for (const auto& [k, v] : h.extra) {
    if (k == "file type" || k == "wavelength units") continue;
    os << k << " = " << v << "\n";
  }
  return os.str();
}

fs::path header_path_for(const fs::path& path) {
  if (path.extension() == ".hdr") return path;
  fs::path p = path;
  if (p.has_extension() && !fs::exists(fs::path(path).concat(".hdr"))) p.replace_extension();
  return p.concat(".hdr");
}

fs::path find_data_file(const fs::path& header_path) {
  fs::path base = header_path;
  base.replace_extension();
  for (const char* ext : {"", ".raw", ".img", ".bsq", ".dat"}) {
    fs::path candidate = base;
    candidate.concat(ext);
    std::error_code ec;
    if (fs::is_regular_file(candidate, ec)) return candidate;
  }
  return {};
}

CubeHeader read_header(const fs::path& path) {
  const fs::path hdr = header_path_for(path);
  std::ifstream in(hdr, std::ios::binary);
  if (!in) throw IoError("cannot open header " + hdr.string());
  std::stringstream ss;
  ss << in.rdbuf();
  CubeHeader h = parse_header(ss.str(), hdr.string());

  const fs::path data = find_data_file(hdr);
  if (data.empty()) throw IoError("no data file found beside " + hdr.string());
  const auto actual = fs::file_size(data);
  const auto expected = static_cast<std::uintmax_t>(h.header_offset + h.data_bytes());
  if (actual != expected) {
    throw FormatError(hdr.string() + ":1: data file " + data.filename().string() + " has " +
                      std::to_string(actual) + " bytes but samples*lines*bands*bytes = " +
                      std::to_string(expected));
  }
  return h;
}

}  // namespace swathcube
