#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace swathcube::service {

/// Lossless RGBA8 PNG, row-major, no filtering choices exposed.
std::string encode_png_rgba(std::span<const std::uint8_t> rgba, std::size_t width, std::size_t height);

struct DecodedImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgba;
};

/// Decodes any PNG into RGBA8.
DecodedImage decode_png_rgba(std::span<const std::uint8_t> png);

}  // namespace swathcube::service
