#pragma once

#include <cstdio>
#include <filesystem>
#include <span>
#include <vector>

#include "swathcube/envi_header.hpp"

namespace swathcube {

/// Streams a BSQ cube band by band. Writes `<base>.raw` as bands arrive and
/// `<base>.hdr` on finish(). If the writer is destroyed before finish(), or a
/// band has the wrong size, both files are removed.
class CubeWriter {
 public:
  /// `header.interleave` must be BSQ. The byte order defaults to native; pass
  /// the other order only to produce foreign-order fixtures.
  CubeWriter(std::filesystem::path base, CubeHeader header);
  ~CubeWriter();
  CubeWriter(const CubeWriter&) = delete;
  CubeWriter& operator=(const CubeWriter&) = delete;

  /// Integer types round to nearest and saturate at the type's range.
  void write_band(std::span<const float> values);
  void finish();

  std::size_t bands_written() const noexcept { return bands_written_; }
  const std::filesystem::path& header_path() const noexcept { return header_path_; }
  const std::filesystem::path& data_path() const noexcept { return data_path_; }

 private:
  void abort() noexcept;

  CubeHeader header_;
  std::filesystem::path header_path_;
  std::filesystem::path data_path_;
  std::FILE* file_ = nullptr;
  std::size_t bands_written_ = 0;
  bool finished_ = false;
  std::vector<std::byte> scratch_;
};

/// Convenience: writes all planes (band-major, each samples * lines values).
void write_cube(const std::filesystem::path& base, const CubeHeader& header,
                std::span<const std::vector<float>> planes);

/// `base.hdr` / `base.raw`, accepting a base given with either extension.
std::filesystem::path output_base(const std::filesystem::path& path);

}  // namespace swathcube
