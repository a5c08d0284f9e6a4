#include "swathcube/service/png.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>

#include "swathcube/error.hpp"

namespace swathcube::service {

namespace {

void write_to_string(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), length);
}

struct ReadCursor {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;
};

void read_from_span(png_structp png, png_bytep out, png_size_t length) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + length > cur->data.size()) png_error(png, "truncated PNG");
  std::memcpy(out, cur->data.data() + cur->pos, length);
  cur->pos += length;
}

void on_warning(png_structp, png_const_charp) {}

}  // namespace

std::string encode_png_rgba(std::span<const std::uint8_t> rgba, std::size_t width, std::size_t height) {
  if (rgba.size() != width * height * 4) throw Error("png: pixel buffer size mismatch");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, on_warning);
  if (png == nullptr) throw Error("png: cannot create writer");
  png_infop info = png_create_info_struct(png);
  std::string out;
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("png: encoding failed");
  }
  {
    png_set_write_fn(png, &out, write_to_string, nullptr);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 3);
    png_write_info(png, info);
    for (std::size_t y = 0; y < height; ++y)
      png_write_row(png, const_cast<png_bytep>(rgba.data() + y * width * 4));
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

DecodedImage decode_png_rgba(std::span<const std::uint8_t> data) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, on_warning);
  if (png == nullptr) throw Error("png: cannot create reader");
  png_infop info = png_create_info_struct(png);
  DecodedImage img;
  ReadCursor cur{data, 0};
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("png: decoding failed");
  }
  {
    png_set_read_fn(png, &cur, read_from_span);
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_gray_to_rgb(png);
    png_set_add_alpha(png, 0xff, PNG_FILLER_AFTER);
    png_read_update_info(png, info);
    img.width = png_get_image_width(png, info);
    img.height = png_get_image_height(png, info);
    img.rgba.resize(img.width * img.height * 4);
    for (std::size_t y = 0; y < img.height; ++y) png_read_row(png, img.rgba.data() + y * img.width * 4, nullptr);
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace swathcube::service
