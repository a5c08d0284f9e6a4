#include "swathcube/cube_writer.hpp"

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "swathcube/error.hpp"

namespace swathcube {

namespace fs = std::filesystem;

namespace {

template <class T>
T saturate(float v) {
  if (std::isnan(v)) return T{0};
  const float r = std::nearbyint(v);
  if (r <= static_cast<float>(std::numeric_limits<T>::min())) return std::numeric_limits<T>::min();
  if (r >= static_cast<float>(std::numeric_limits<T>::max())) return std::numeric_limits<T>::max();
  return static_cast<T>(r);
}

template <class T>
void store(std::byte* out, T v, bool swap) {
  if (swap) {
    if constexpr (sizeof(T) == 2) {
      auto u = std::bit_cast<std::uint16_t>(v);
      v = std::bit_cast<T>(static_cast<std::uint16_t>((u >> 8) | (u << 8)));
    } else if constexpr (sizeof(T) == 4) {
      v = std::bit_cast<T>(__builtin_bswap32(std::bit_cast<std::uint32_t>(v)));
    }
  }
  std::memcpy(out, &v, sizeof(T));
}

}  // namespace

fs::path output_base(const fs::path& path) {
  fs::path base = path;
  const auto ext = base.extension();
  if (ext == ".hdr" || ext == ".raw" || ext == ".img" || ext == ".bsq") base.replace_extension();
  return base;
}

CubeWriter::CubeWriter(fs::path base, CubeHeader header) : header_(std::move(header)) {
  if (header_.interleave != Interleave::bsq) throw Error("CubeWriter only writes BSQ cubes");
  if (header_.samples == 0 || header_.lines == 0 || header_.bands == 0)
    throw Error("CubeWriter needs positive dimensions");
  if (!header_.wavelengths.empty() && header_.wavelengths.size() != header_.bands)
    throw Error("wavelength count does not match band count");
  base = output_base(base);
  header_path_ = fs::path(base).concat(".hdr");
  data_path_ = fs::path(base).concat(".raw");
  if (base.has_parent_path()) fs::create_directories(base.parent_path());
  file_ = std::fopen(data_path_.c_str(), "wb");
  if (file_ == nullptr)
    throw IoError("cannot create " + data_path_.string() + ": " + std::strerror(errno));
  header_.header_offset = 0;
}

CubeWriter::~CubeWriter() {
  if (!finished_) abort();
}

void CubeWriter::abort() noexcept {
  if (file_ != nullptr) {
    std::fclose(file_);
    file_ = nullptr;
  }
  std::error_code ec;
  fs::remove(data_path_, ec);
  fs::remove(header_path_, ec);
}

void CubeWriter::write_band(std::span<const float> values) {
  if (finished_ || file_ == nullptr) throw Error("CubeWriter already closed");
  const std::size_t n = header_.samples * header_.lines;
  if (values.size() != n || bands_written_ >= header_.bands) {
    const std::string msg = bands_written_ >= header_.bands
                                ? "too many bands written to " + data_path_.string()
                                : "band " + std::to_string(bands_written_) + " has " +
                                      std::to_string(values.size()) + " values, expected " +
                                      std::to_string(n);
    abort();
    throw Error(msg);
  }
  const std::size_t bps = bytes_per_sample(header_.data_type);
  const bool swap = header_.byte_order != native_byte_order();
  scratch_.resize(n * bps);
  std::byte* out = scratch_.data();
  switch (header_.data_type) {
    case DataType::u8:
      for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::byte>(saturate<std::uint8_t>(values[i]));
      break;
    case DataType::i16:
      for (std::size_t i = 0; i < n; ++i) store(out + 2 * i, saturate<std::int16_t>(values[i]), swap);
      break;
    case DataType::u16:
      for (std::size_t i = 0; i < n; ++i) store(out + 2 * i, saturate<std::uint16_t>(values[i]), swap);
      break;
    case DataType::f32:
      if (!swap) {
        std::memcpy(out, values.data(), n * 4);
      } else {
        for (std::size_t i = 0; i < n; ++i) store(out + 4 * i, values[i], swap);
      }
      break;
  }
  if (std::fwrite(scratch_.data(), 1, scratch_.size(), file_) != scratch_.size()) {
    const std::string msg = "write failed on " + data_path_.string() + ": " + std::strerror(errno);
    abort();
    throw IoError(msg);
  }
  ++bands_written_;
}

void CubeWriter::finish() {
  if (finished_) return;
  if (bands_written_ != header_.bands) {
    const std::string msg = "cube " + data_path_.string() + " closed after " +
                            std::to_string(bands_written_) + " of " +
                            std::to_string(header_.bands) + " bands";
    abort();
    throw Error(msg);
  }
  if (std::fclose(file_) != 0) {
    file_ = nullptr;
    abort();
    throw IoError("close failed on " + data_path_.string());
  }
  file_ = nullptr;
  std::ofstream hdr(header_path_, std::ios::binary | std::ios::trunc);
  hdr << format_header(header_);
  hdr.close();
  if (!hdr) {
    abort();
    throw IoError("cannot write " + header_path_.string());
  }
  finished_ = true;
}

void write_cube(const fs::path& base, const CubeHeader& header,
                std::span<const std::vector<float>> planes) {
  CubeWriter writer(base, header);
  for (const auto& p : planes) writer.write_band(p);
  writer.finish();
}

}  // namespace swathcube
