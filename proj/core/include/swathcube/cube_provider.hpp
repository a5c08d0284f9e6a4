#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "swathcube/envi_header.hpp"

namespace swathcube {

/// Random-access bytes behind a cube's data file.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual std::uint64_t size() const = 0;
  /// Fills `out` from `offset`; throws IoError on a short read. Must be safe
  /// to call concurrently.
  virtual void read_at(std::uint64_t offset, std::span<std::byte> out) const = 0;
};

std::unique_ptr<ByteSource> open_file_source(const std::filesystem::path& path);

using SourceOpener = std::function<std::unique_ptr<ByteSource>(const std::filesystem::path&)>;

/// File-operation counters, observable by tests and benchmarks.
struct IoCounters {
  std::atomic<std::uint64_t> opens{0};
  std::atomic<std::uint64_t> range_reads{0};
  std::atomic<std::uint64_t> bytes_read{0};
};

/// One band of one cube as 32-bit floats, line-major: values[line * samples + sample].
struct BandPlane {
  std::string cube;
  std::size_t band = 0;
  std::size_t samples = 0;
  std::size_t lines = 0;
  std::vector<float> values;

  float at(std::size_t line, std::size_t sample) const { return values[line * samples + sample]; }
};

struct CubeHandle {
  std::size_t index = 0;
  friend bool operator==(CubeHandle, CubeHandle) = default;
};

/// Hands out cube metadata immediately and band data on request. Opening a
/// cube reads only its header; the data file is touched on the first band
/// request (or preload). Band reads are const and thread-safe.
class CubeProvider {
 public:
  explicit CubeProvider(SourceOpener opener = {});
  ~CubeProvider();
  CubeProvider(const CubeProvider&) = delete;
  CubeProvider& operator=(const CubeProvider&) = delete;

  CubeHandle open(const std::filesystem::path& path);

  std::size_t size() const;
  const CubeHeader& header(CubeHandle h) const;
  const std::string& name(CubeHandle h) const;
  const std::filesystem::path& data_path(CubeHandle h) const;

  /// Reads a full band. BSQ cubes cost exactly one contiguous range read.
  BandPlane read_band(CubeHandle h, std::size_t band) const;

  /// Loads whole data files into memory. Missing files raise IoError before
  /// anything is loaded; allocation failure falls back to on-demand reads for
  /// that cube with a warning.
  void preload(std::span<const CubeHandle> handles);
  bool is_preloaded(CubeHandle h) const;

  const IoCounters& io() const noexcept { return *io_; }

 private:
  struct Entry;
  const Entry& entry(CubeHandle h) const;

  SourceOpener opener_;
  std::shared_ptr<IoCounters> io_;
  std::vector<std::unique_ptr<Entry>> entries_;
};

/// Converts raw bytes of the given type and byte order to floats.
void decode_samples(std::span<const std::byte> in, DataType type, int byte_order,
                    std::span<float> out);

}  // namespace swathcube
