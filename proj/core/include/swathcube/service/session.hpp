#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "swathcube/collection.hpp"
#include "swathcube/export.hpp"
#include "swathcube/render.hpp"
#include "swathcube/stretch.hpp"

namespace swathcube::service {

inline constexpr std::size_t kTileSize = 256;

struct TileKey {
  int z = 0;
  std::int64_t tx = 0;
  std::int64_t ty = 0;
  friend bool operator==(const TileKey&, const TileKey&) = default;
};

/// Square tile pyramid anchored at the north-west corner of the collection
/// bounds. Level z splits the root extent into 2^z by 2^z tiles.
struct Pyramid {
  double origin_north = 0;
  double origin_east = 0;
  double extent = 0;  // meters covered by the level-0 tile
  int max_zoom = 0;

  static Pyramid over(const Bounds& bounds, double finest_pixel);
  double pixel_size(int z) const;
  /// Grid of the whole level; tile (tx, ty) is its crop at (256 tx, 256 ty).
  PixelGrid level_grid(int z) const;
  PixelGrid tile_grid(const TileKey& key) const;
  bool contains(const TileKey& key) const;
};

/// Display parameters shared by every tile of one generation.
struct ViewParams {
  std::vector<double> wavelengths;  // 1 to 3 channels, nm
  ProcessingMode mode = ProcessingMode::relative;
  StretchMode stretch = StretchMode::per_channel;
  double ground_height = 0;
  std::size_t first_cube = 0;
  std::size_t last_cube = 0;
  friend bool operator==(const ViewParams&, const ViewParams&) = default;
};

/// A partial parameter change; unset fields keep their value.
struct ParamsUpdate {
  std::optional<std::vector<double>> wavelengths;
  std::optional<ProcessingMode> mode;
  std::optional<StretchMode> stretch;
  std::optional<double> ground_height;
  std::optional<std::size_t> first_cube;
  std::optional<std::size_t> last_cube;
};

enum class LoadStatus { not_loaded, loading, ready };
std::string_view to_string(LoadStatus s);

struct Tile {
  TileKey key;
  std::uint64_t generation = 0;
  PixelBuffer buffer;
  std::vector<std::uint8_t> rgba;
  std::size_t covered = 0;
  std::size_t pending = 0;
};

struct ExportJobStatus {
  enum class State { queued, running, done, failed, cancelled };
  std::uint64_t id = 0;
  State state = State::queued;
  std::size_t bands_done = 0;
  std::size_t bands_total = 0;
  std::string message;
  std::string output;
};
std::string_view to_string(ExportJobStatus::State s);

/// Server-pushed notification; `data` is a JSON object.
struct Event {
  std::uint64_t seq = 0;
  std::string type;
  std::string data;
};

struct SessionOptions {
  std::size_t cache_bytes = std::size_t{256} << 20;
  unsigned loaders = 1;  // background band loader threads
  std::optional<int> max_zoom;
  double histogram_max_pixels = 4096.0 * 4096.0;
};

struct HistogramResult {
  std::vector<Histogram> channels;
  std::optional<StretchBounds> bounds;  // unset when nothing is covered
};

/// Viewer state around one open collection. Parameter and metadata calls
/// never wait on band I/O: tiles render with whatever bands are loaded and
/// show the rest as pending.
class Session {
 public:
  Session(std::shared_ptr<Collection> collection, SessionOptions options = {});
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// Starts background loading of the bands the current parameters need.
  void start();
  void shutdown();

  const Collection& collection() const noexcept { return *collection_; }
  const Pyramid& pyramid() const noexcept { return pyramid_; }

  std::uint64_t generation() const noexcept { return generation_.load(); }
  ViewParams params() const;
  /// Validates the whole update first; on error nothing changes. Returns the
  /// new generation.
  std::uint64_t set_params(const ParamsUpdate& update);

  /// Bands selected for the current wavelengths.
  std::vector<std::size_t> selected_bands() const;
  LoadStatus band_status(std::size_t cube, std::size_t band) const;
  /// Least advanced status over the selected bands of one cube.
  LoadStatus cube_status(std::size_t cube) const;
  /// Blocks until every selected band of every cube is ready (tests, CLI).
  bool wait_until_loaded(std::chrono::milliseconds timeout) const;

  /// Renders (or fetches from cache) a tile for `generation`. Throws
  /// CancelledError when that generation is superseded before or during the
  /// render, and Error for an unknown tile or stale generation.
  std::shared_ptr<const Tile> tile(const TileKey& key, std::optional<std::uint64_t> generation = {});

  /// Free-form render with the current parameters, unstretched values.
  PixelBuffer render_view(const PixelGrid& grid) const;

  /// Histogram of the covered values in a viewport. Non-empty results
  /// replace the session stretch bounds.
  HistogramResult histogram(const ViewWindow& view);
  std::optional<StretchBounds> stretch_bounds() const;

  std::uint64_t submit_export(ExportRequest request);
  std::optional<ExportJobStatus> export_status(std::uint64_t id) const;

  /// Events with seq > after, waiting up to `timeout` for one to arrive.
  std::vector<Event> events_after(std::uint64_t after, std::chrono::milliseconds timeout) const;

  std::size_t cached_tiles() const;
  std::uint64_t load_epoch() const noexcept { return load_epoch_.load(); }

  /// Test hook, called after parameters are captured and before rendering.
  std::function<void(const TileKey&, std::uint64_t)> before_render;

 private:
  struct BandEntry {
    LoadStatus status = LoadStatus::not_loaded;
    std::shared_ptr<const BandPlane> plane;
  };
  struct Snapshot {
    ViewParams params;
    std::uint64_t generation = 0;
    std::shared_ptr<const MeshSet> meshes;
    std::vector<std::size_t> bands;
    std::optional<StretchBounds> stretch;
    std::uint64_t load_epoch = 0;
    std::vector<std::vector<std::shared_ptr<const BandPlane>>> planes;  // [channel][layer]
  };

  Snapshot snapshot() const;
  std::vector<std::size_t> bands_for(const std::vector<double>& wavelengths) const;
  void request_bands(const std::vector<std::size_t>& bands);
  void loader_loop();
  void export_loop();
  void publish(std::string type, std::string data);
  PixelBuffer render_snapshot(const Snapshot& s, const PixelGrid& grid, const CancelCheck& cancelled) const;
  std::string cache_key(const TileKey& key, const Snapshot& s) const;
  void cache_put(const std::string& key, std::shared_ptr<const Tile> tile);
  std::shared_ptr<const Tile> cache_get(const std::string& key);

  std::shared_ptr<Collection> collection_;
  SessionOptions options_;
  Pyramid pyramid_;

  mutable std::mutex params_mutex_;
  ViewParams params_;
  std::shared_ptr<const MeshSet> meshes_;
  std::optional<StretchBounds> stretch_;
  std::atomic<std::uint64_t> generation_{1};

  mutable std::mutex bands_mutex_;
  mutable std::condition_variable bands_cv_;
  std::vector<std::vector<BandEntry>> bands_;  // [cube][band]
  std::deque<std::pair<std::size_t, std::size_t>> load_queue_;
  std::atomic<std::uint64_t> load_epoch_{0};
  bool started_ = false;
  bool stopping_ = false;
  std::vector<std::thread> loaders_;

  mutable std::mutex cache_mutex_;
  std::list<std::pair<std::string, std::shared_ptr<const Tile>>> lru_;
  std::unordered_map<std::string, decltype(lru_)::iterator> cache_index_;
  std::size_t cache_bytes_ = 0;

  mutable std::mutex jobs_mutex_;
  std::condition_variable jobs_cv_;
  std::map<std::uint64_t, ExportJobStatus> jobs_;
  std::deque<std::pair<std::uint64_t, ExportRequest>> job_queue_;
  std::uint64_t next_job_ = 1;
  std::thread export_thread_;

  mutable std::mutex events_mutex_;
  mutable std::condition_variable events_cv_;
  std::deque<Event> events_;
  std::uint64_t next_event_ = 1;
};

/// Default display wavelengths: nearest bands to 640, 550 and 460 nm, or a
/// single band for cubes with fewer than three.
std::vector<double> default_wavelengths(const std::vector<double>& wavelengths);

}  // namespace swathcube::service
