#include "swathcube/cube_provider.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <bit>
#include <cerrno>
#include <cstring>
#include <mutex>

#include <spdlog/spdlog.h>

#include "swathcube/error.hpp"

namespace swathcube {

namespace fs = std::filesystem;

namespace {

class FileSource final : public ByteSource {
 public:
  explicit FileSource(const fs::path& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd_ < 0) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
    size_ = fs::file_size(path);
  }
  ~FileSource() override { ::close(fd_); }
  FileSource(const FileSource&) = delete;
  FileSource& operator=(const FileSource&) = delete;

  std::uint64_t size() const override { return size_; }

  void read_at(std::uint64_t offset, std::span<std::byte> out) const override {
    std::size_t done = 0;
    while (done < out.size()) {
      const ssize_t n = ::pread(fd_, out.data() + done, out.size() - done,
                                static_cast<off_t>(offset + done));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw IoError("read failed on " + path_.string() + ": " + std::strerror(errno));
      }
      if (n == 0) {
        throw IoError("truncated file " + path_.string() + ": wanted " +
                      std::to_string(out.size()) + " bytes at offset " + std::to_string(offset));
      }
      done += static_cast<std::size_t>(n);
    }
  }

 private:
  fs::path path_;
  int fd_ = -1;
  std::uint64_t size_ = 0;
};

class MemorySource final : public ByteSource {
 public:
  explicit MemorySource(std::vector<std::byte> bytes) : bytes_(std::move(bytes)) {}
  std::uint64_t size() const override { return bytes_.size(); }
  void read_at(std::uint64_t offset, std::span<std::byte> out) const override {
    if (offset + out.size() > bytes_.size()) throw IoError("read past end of preloaded cube");
    std::memcpy(out.data(), bytes_.data() + offset, out.size());
  }

 private:
  std::vector<std::byte> bytes_;
};

class CountingSource final : public ByteSource {
 public:
  CountingSource(std::unique_ptr<ByteSource> inner, std::shared_ptr<IoCounters> io)
      : inner_(std::move(inner)), io_(std::move(io)) {}
  std::uint64_t size() const override { return inner_->size(); }
  void read_at(std::uint64_t offset, std::span<std::byte> out) const override {
    io_->range_reads.fetch_add(1, std::memory_order_relaxed);
    io_->bytes_read.fetch_add(out.size(), std::memory_order_relaxed);
    inner_->read_at(offset, out);
  }

 private:
  std::unique_ptr<ByteSource> inner_;
  std::shared_ptr<IoCounters> io_;
};

template <class T>
T load_swapped(const std::byte* p, bool swap) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  if (swap) {
    if constexpr (sizeof(T) == 2) {
      auto u = std::bit_cast<std::uint16_t>(v);
      u = static_cast<std::uint16_t>((u >> 8) | (u << 8));
      v = std::bit_cast<T>(u);
    } else if constexpr (sizeof(T) == 4) {
      v = std::bit_cast<T>(__builtin_bswap32(std::bit_cast<std::uint32_t>(v)));
    }
  }
  return v;
}

}  // namespace

std::unique_ptr<ByteSource> open_file_source(const fs::path& path) {
  return std::make_unique<FileSource>(path);
}

void decode_samples(std::span<const std::byte> in, DataType type, int byte_order,
                    std::span<float> out) {
  const std::size_t bps = bytes_per_sample(type);
  if (in.size() != out.size() * bps) throw Error("decode_samples: size mismatch");
  const bool swap = byte_order != native_byte_order();
  const std::byte* p = in.data();
  switch (type) {
    case DataType::u8:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<float>(std::to_integer<std::uint8_t>(p[i]));
      break;
    case DataType::i16:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = load_swapped<std::int16_t>(p + 2 * i, swap);
      break;
    case DataType::u16:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = load_swapped<std::uint16_t>(p + 2 * i, swap);
      break;
    case DataType::f32:
      if (!swap) {
        std::memcpy(out.data(), p, in.size());
      } else {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = load_swapped<float>(p + 4 * i, swap);
      }
      break;
  }
}

struct CubeProvider::Entry {
  fs::path header_path;
  fs::path data_path;
  std::string name;
  CubeHeader header;
  mutable std::mutex mutex;
  mutable std::shared_ptr<const ByteSource> source;
  bool preloaded = false;
};

CubeProvider::CubeProvider(SourceOpener opener)
    : opener_(std::move(opener)), io_(std::make_shared<IoCounters>()) {
  if (!opener_) opener_ = [](const fs::path& p) { return open_file_source(p); };
}

CubeProvider::~CubeProvider() = default;

CubeHandle CubeProvider::open(const fs::path& path) {
  auto e = std::make_unique<Entry>();
  e->header_path = header_path_for(path);
  e->header = read_header(e->header_path);
  e->data_path = find_data_file(e->header_path);
  e->name = e->header_path.stem().string();
  entries_.push_back(std::move(e));
  return {entries_.size() - 1};
}

std::size_t CubeProvider::size() const { return entries_.size(); }

const CubeProvider::Entry& CubeProvider::entry(CubeHandle h) const {
  if (h.index >= entries_.size()) throw Error("invalid cube handle " + std::to_string(h.index));
  return *entries_[h.index];
}

const CubeHeader& CubeProvider::header(CubeHandle h) const { return entry(h).header; }
const std::string& CubeProvider::name(CubeHandle h) const { return entry(h).name; }
const fs::path& CubeProvider::data_path(CubeHandle h) const { return entry(h).data_path; }

BandPlane CubeProvider::read_band(CubeHandle h, std::size_t band) const {
  const Entry& e = entry(h);
  const CubeHeader& hd = e.header;
  if (band >= hd.bands) {
    throw Error("band " + std::to_string(band) + " out of range for cube " + e.name + " with " +
                std::to_string(hd.bands) + " bands");
  }
  std::shared_ptr<const ByteSource> source;
  {
    std::lock_guard lock(e.mutex);
    if (!e.source) {
      e.source = std::make_shared<CountingSource>(opener_(e.data_path), io_);
      io_->opens.fetch_add(1, std::memory_order_relaxed);
    }
    source = e.source;
  }

  BandPlane plane;
  plane.cube = e.name;
  plane.band = band;
  plane.samples = hd.samples;
  plane.lines = hd.lines;
  plane.values.resize(hd.samples * hd.lines);

  const std::size_t bps = bytes_per_sample(hd.data_type);
  const std::size_t n = hd.samples * hd.lines;
  switch (hd.interleave) {
    case Interleave::bsq: {
      std::vector<std::byte> raw(n * bps);
      source->read_at(hd.header_offset + band * hd.band_bytes(), raw);
      decode_samples(raw, hd.data_type, hd.byte_order, plane.values);
      break;
    }
    case Interleave::bil: {
      // Each line stores all bands for that line back to back.
      std::vector<std::byte> raw(hd.samples * bps);
      for (std::size_t line = 0; line < hd.lines; ++line) {
        const std::uint64_t off = hd.header_offset + ((line * hd.bands + band) * hd.samples) * bps;
        source->read_at(off, raw);
        decode_samples(raw, hd.data_type, hd.byte_order,
                       std::span<float>(plane.values).subspan(line * hd.samples, hd.samples));
      }
      break;
    }
    case Interleave::bip: {
      std::vector<std::byte> raw(hd.samples * hd.bands * bps);
      std::vector<float> decoded(hd.samples * hd.bands);
      for (std::size_t line = 0; line < hd.lines; ++line) {
        source->read_at(hd.header_offset + line * hd.samples * hd.bands * bps, raw);
        decode_samples(raw, hd.data_type, hd.byte_order, decoded);
        for (std::size_t s = 0; s < hd.samples; ++s)
          plane.values[line * hd.samples + s] = decoded[s * hd.bands + band];
      }
      break;
    }
  }
  return plane;
}

void CubeProvider::preload(std::span<const CubeHandle> handles) {
  for (CubeHandle h : handles) {
    const Entry& e = entry(h);
    std::error_code ec;
    if (!fs::is_regular_file(e.data_path, ec))
      throw IoError("cannot preload cube " + e.name + ": missing data file " + e.data_path.string());
  }
  for (CubeHandle h : handles) {
    Entry& e = *entries_[h.index];
    {
      std::lock_guard lock(e.mutex);
      if (e.preloaded) continue;
    }
    try {
      auto file = CountingSource(opener_(e.data_path), io_);
      io_->opens.fetch_add(1, std::memory_order_relaxed);
      std::vector<std::byte> bytes(file.size());
      file.read_at(0, bytes);
      auto memory = std::make_shared<MemorySource>(std::move(bytes));
      std::lock_guard lock(e.mutex);
      e.source = std::move(memory);
      e.preloaded = true;
    } catch (const std::bad_alloc&) {
      spdlog::warn("not enough memory to preload cube {}; reading bands on demand", e.name);
    }
  }
}

bool CubeProvider::is_preloaded(CubeHandle h) const {
  const Entry& e = entry(h);
  std::lock_guard lock(e.mutex);
  return e.preloaded;
}

}  // namespace swathcube
