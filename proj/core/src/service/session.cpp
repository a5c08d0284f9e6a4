#include "swathcube/service/session.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "swathcube/error.hpp"
#include "swathcube/log.hpp"

namespace swathcube::service {

using nlohmann::json;

std::string_view to_string(LoadStatus s) {
  switch (s) {
    case LoadStatus::not_loaded:
      return "not-loaded";
    case LoadStatus::loading:
      return "loading";
    case LoadStatus::ready:
      return "ready";
  }
  return "not-loaded";
}

std::string_view to_string(ExportJobStatus::State s) {
  switch (s) {
    case ExportJobStatus::State::queued:
      return "queued";
    case ExportJobStatus::State::running:
      return "running";
    case ExportJobStatus::State::done:
      return "done";
    case ExportJobStatus::State::failed:
      return "failed";
    case ExportJobStatus::State::cancelled:
      return "cancelled";
  }
  return "failed";
}

Pyramid Pyramid::over(const Bounds& bounds, double finest_pixel) {
  Pyramid p;
  p.origin_north = bounds.max_north;
  p.origin_east = bounds.min_east;
  p.extent = std::max({bounds.width(), bounds.height(), 1e-3});
  const double levels = std::log2(p.extent / (static_cast<double>(kTileSize) * finest_pixel));
  p.max_zoom = std::clamp(static_cast<int>(std::ceil(levels)), 0, 22);
  return p;
}

double Pyramid::pixel_size(int z) const { return extent / (static_cast<double>(kTileSize) * std::ldexp(1.0, z)); }

PixelGrid Pyramid::level_grid(int z) const {
  PixelGrid g;
  g.origin_north = origin_north;
  g.origin_east = origin_east;
  g.pixel_north = g.pixel_east = pixel_size(z);
  g.width = g.height = kTileSize << z;
  return g;
}

PixelGrid Pyramid::tile_grid(const TileKey& key) const {
  return level_grid(key.z).crop(key.tx * static_cast<std::int64_t>(kTileSize),
                                key.ty * static_cast<std::int64_t>(kTileSize), kTileSize, kTileSize);
}

bool Pyramid::contains(const TileKey& key) const {
  if (key.z < 0 || key.z > max_zoom) return false;
  const std::int64_t n = std::int64_t{1} << key.z;
  return key.tx >= 0 && key.ty >= 0 && key.tx < n && key.ty < n;
}

std::vector<double> default_wavelengths(const std::vector<double>& wavelengths) {
  if (wavelengths.empty()) return {};
  if (wavelengths.size() < 3) return {wavelengths.front()};
  std::vector<double> out;
  for (double target : {640.0, 550.0, 460.0}) out.push_back(wavelengths[nearest_band(wavelengths, target)]);
  return out;
}

namespace {

double nominal_gsd(const MeshSet& set) {
  for (const auto& m : set.meshes) {
    if (m.vertices.size() < 2) continue;
    const double dn = m.vertices[1].north - m.vertices[0].north;
    const double de = m.vertices[1].east - m.vertices[0].east;
    return std::hypot(dn, de) / static_cast<double>(m.samples);
  }
  return 0.01;
}

}  // namespace

Session::Session(std::shared_ptr<Collection> collection, SessionOptions options)
    : collection_(std::move(collection)), options_(options) {
  if (!collection_ || collection_->size() == 0) throw Error("session needs a non-empty collection");
  const Collection& c = *collection_;
  params_.wavelengths = default_wavelengths(c.wavelengths());
  params_.mode = c.calibration() ? ProcessingMode::radiance : ProcessingMode::relative;
  params_.stretch = StretchMode::per_channel;
  params_.ground_height = c.default_ground_height();
  params_.first_cube = 0;
  params_.last_cube = c.size() - 1;
  meshes_ = c.meshes();
  pyramid_ = Pyramid::over(meshes_->bounds(), nominal_gsd(*meshes_) / 4.0);
  if (options_.max_zoom) pyramid_.max_zoom = std::clamp(*options_.max_zoom, 0, 22);
  bands_.assign(c.size(), std::vector<BandEntry>(c.bands()));
  export_thread_ = std::thread([this] { export_loop(); });
}

Session::~Session() { shutdown(); }

void Session::start() {
  {
    std::lock_guard lock(bands_mutex_);
    if (started_) return;
    started_ = true;
    for (unsigned i = 0; i < std::max(1u, options_.loaders); ++i) loaders_.emplace_back([this] { loader_loop(); });
  }
  request_bands(selected_bands());
}

void Session::shutdown() {
  {
    std::lock_guard lock(bands_mutex_);
    if (stopping_) return;
    stopping_ = true;
  }
  bands_cv_.notify_all();
  {
    std::lock_guard lock(jobs_mutex_);
  }
  jobs_cv_.notify_all();
  events_cv_.notify_all();
  for (auto& t : loaders_) t.join();
  if (export_thread_.joinable()) export_thread_.join();
}

ViewParams Session::params() const {
  std::lock_guard lock(params_mutex_);
  return params_;
}

std::vector<std::size_t> Session::bands_for(const std::vector<double>& wavelengths) const {
  std::vector<std::size_t> out;
  const auto& wl = collection_->wavelengths();
  for (double w : wavelengths) out.push_back(wl.empty() ? 0 : nearest_band(wl, w));
  if (out.empty()) out.push_back(0);
  return out;
}

std::vector<std::size_t> Session::selected_bands() const { return bands_for(params().wavelengths); }

std::uint64_t Session::set_params(const ParamsUpdate& u) {
  const Collection& c = *collection_;
  ViewParams next = params();
  std::vector<std::string> problems;
  if (u.wavelengths) {
    if (u.wavelengths->empty() || u.wavelengths->size() > 3) problems.push_back("select 1 to 3 wavelengths");
    for (double w : *u.wavelengths) {
      if (!std::isfinite(w) || !(w > 0)) problems.push_back("wavelengths must be positive");
    }
    next.wavelengths = *u.wavelengths;
  }
  if (u.mode) {
    try {
      c.check_mode(*u.mode);
    } catch (const ConfigError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
    next.mode = *u.mode;
  }
  if (u.stretch) next.stretch = *u.stretch;
  if (u.first_cube) next.first_cube = *u.first_cube;
  if (u.last_cube) next.last_cube = *u.last_cube;
  if (next.first_cube > next.last_cube || next.last_cube >= c.size())
    problems.push_back("cube range must satisfy first <= last < " + std::to_string(c.size()));
  std::shared_ptr<const MeshSet> meshes;
  if (u.ground_height && *u.ground_height != next.ground_height) {
    if (!std::isfinite(*u.ground_height)) {
      problems.push_back("ground height must be finite");
    } else {
      try {
        meshes = c.meshes_for(*u.ground_height);
      } catch (const Error& e) {
        problems.push_back(std::string("ground height ") + std::to_string(*u.ground_height) + ": " + e.what());
      }
    }
    next.ground_height = *u.ground_height;
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));

  std::uint64_t gen = 0;
  bool reload = false;
  {
    std::lock_guard lock(params_mutex_);
    const ViewParams prev = params_;
    reload = next.wavelengths != prev.wavelengths;
    if (next.wavelengths != prev.wavelengths || next.mode != prev.mode || next.stretch != prev.stretch)
      stretch_.reset();
    params_ = next;
    if (meshes) meshes_ = meshes;
    gen = ++generation_;
  }
  if (reload) request_bands(bands_for(next.wavelengths));
  publish("params", json{{"generation", gen}}.dump());
  return gen;
}

LoadStatus Session::band_status(std::size_t cube, std::size_t band) const {
  std::lock_guard lock(bands_mutex_);
  return bands_.at(cube).at(band).status;
}

LoadStatus Session::cube_status(std::size_t cube) const {
  const auto bands = selected_bands();
  std::lock_guard lock(bands_mutex_);
  LoadStatus s = LoadStatus::ready;
  for (std::size_t b : bands) s = std::min(s, bands_.at(cube).at(b).status);
  return s;
}

bool Session::wait_until_loaded(std::chrono::milliseconds timeout) const {
  const auto bands = selected_bands();
  std::unique_lock lock(bands_mutex_);
  return bands_cv_.wait_for(lock, timeout, [&] {
    for (const auto& cube : bands_) {
      for (std::size_t b : bands) {
        if (cube[b].status != LoadStatus::ready) return false;
      }
    }
    return true;
  });
}

void Session::request_bands(const std::vector<std::size_t>& bands) {
  std::vector<std::pair<std::size_t, std::size_t>> marked;
  {
    std::lock_guard lock(bands_mutex_);
    for (std::size_t b : bands) {
      for (std::size_t c = 0; c < bands_.size(); ++c) {
        BandEntry& e = bands_[c][b];
        if (e.status != LoadStatus::not_loaded) continue;
        e.status = LoadStatus::loading;
        load_queue_.emplace_back(c, b);
        marked.emplace_back(c, b);
      }
    }
  }
  bands_cv_.notify_all();
  for (const auto& [c, b] : marked)
    publish("band", json{{"cube", c}, {"band", b}, {"status", "loading"}}.dump());
}

void Session::loader_loop() {
  while (true) {
    std::pair<std::size_t, std::size_t> job;
    {
      std::unique_lock lock(bands_mutex_);
      bands_cv_.wait(lock, [&] { return stopping_ || !load_queue_.empty(); });
      if (stopping_) return;
      job = load_queue_.front();
      load_queue_.pop_front();
    }
    const auto [c, b] = job;
    try {
      auto plane = std::make_shared<const BandPlane>(
          collection_->provider().read_band(collection_->handle(c), b));
      {
        std::lock_guard lock(bands_mutex_);
        bands_[c][b].plane = std::move(plane);
        bands_[c][b].status = LoadStatus::ready;
        ++load_epoch_;
      }
      bands_cv_.notify_all();
      publish("band", json{{"cube", c}, {"band", b}, {"status", "ready"}}.dump());
    } catch (const std::exception& e) {
      log::error(std::string("loading band ") + std::to_string(b) + " of cube " + collection_->name(c) +
                 ": " + e.what());
      publish("error", json{{"cube", c}, {"band", b}, {"message", e.what()}}.dump());
    }
  }
}

Session::Snapshot Session::snapshot() const {
  Snapshot s;
  {
    std::lock_guard lock(params_mutex_);
    s.params = params_;
    s.generation = generation_.load();
    s.meshes = meshes_;
    s.stretch = stretch_;
  }
  s.bands = bands_for(s.params.wavelengths);
  {
    std::lock_guard lock(bands_mutex_);
    s.load_epoch = load_epoch_.load();
    s.planes.resize(s.bands.size());
    for (std::size_t ch = 0; ch < s.bands.size(); ++ch) {
      for (std::size_t c = s.params.first_cube; c <= s.params.last_cube; ++c)
        s.planes[ch].push_back(bands_[c][s.bands[ch]].plane);
    }
  }
  return s;
}

PixelBuffer Session::render_snapshot(const Snapshot& s, const PixelGrid& grid, const CancelCheck& cancelled) const {
  std::vector<const FootprintMesh*> layers;
  for (std::size_t c = s.params.first_cube; c <= s.params.last_cube; ++c) layers.push_back(&s.meshes->meshes[c]);
  const RasterPlan plan = build_plan(layers, grid, 1, cancelled);
  std::vector<std::vector<LayerBand>> channels(s.bands.size());
  for (std::size_t ch = 0; ch < s.bands.size(); ++ch) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const std::size_t cube = s.params.first_cube + i;
      channels[ch].push_back({s.planes[ch][i].get(), collection_->calibrator(cube, s.bands[ch], s.params.mode)});
    }
  }
  return shade_plan(plan, channels, 0.0f);
}

PixelBuffer Session::render_view(const PixelGrid& grid) const { return render_snapshot(snapshot(), grid, {}); }

std::string Session::cache_key(const TileKey& key, const Snapshot& s) const {
  std::ostringstream os;
  os.precision(17);
  os << key.z << '/' << key.tx << '/' << key.ty << '|' << static_cast<int>(s.params.mode) << '|'
     << static_cast<int>(s.params.stretch) << '|' << s.params.ground_height << '|' << s.params.first_cube << ':'
     << s.params.last_cube << '|' << s.load_epoch << '|';
  for (double w : s.params.wavelengths) os << w << ',';
  if (s.stretch) {
    os << '|';
    for (std::size_t i = 0; i < s.stretch->low.size(); ++i) os << s.stretch->low[i] << ':' << s.stretch->high[i] << ',';
  }
  return os.str();
}

std::shared_ptr<const Tile> Session::cache_get(const std::string& key) {
  std::lock_guard lock(cache_mutex_);
  const auto it = cache_index_.find(key);
  if (it == cache_index_.end()) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second);
  return it->second->second;
}

void Session::cache_put(const std::string& key, std::shared_ptr<const Tile> tile) {
  const std::size_t bytes = tile->rgba.size() + tile->buffer.values.size() * sizeof(float) + tile->buffer.coverage.size();
  std::lock_guard lock(cache_mutex_);
  if (cache_index_.count(key) != 0) return;
  lru_.emplace_front(key, std::move(tile));
  cache_index_[key] = lru_.begin();
  cache_bytes_ += bytes;
  while (cache_bytes_ > options_.cache_bytes && lru_.size() > 1) {
    const auto& back = lru_.back();
    cache_bytes_ -= back.second->rgba.size() + back.second->buffer.values.size() * sizeof(float) +
                    back.second->buffer.coverage.size();
    cache_index_.erase(back.first);
    lru_.pop_back();
  }
}

std::size_t Session::cached_tiles() const {
  std::lock_guard lock(cache_mutex_);
  return lru_.size();
}

std::shared_ptr<const Tile> Session::tile(const TileKey& key, std::optional<std::uint64_t> generation) {
  if (!pyramid_.contains(key)) throw Error("tile " + std::to_string(key.z) + "/" + std::to_string(key.tx) + "/" +
                                           std::to_string(key.ty) + " is outside the pyramid");
  const std::uint64_t current = generation_.load();
  if (generation && *generation > current) throw Error("generation " + std::to_string(*generation) + " does not exist yet");
  if (generation && *generation < current) throw CancelledError();

  const Snapshot s = snapshot();
  if (generation && s.generation != *generation) throw CancelledError();
  const std::string ck = cache_key(key, s);
  if (auto hit = cache_get(ck)) return hit;

  if (before_render) before_render(key, s.generation);
  const CancelCheck cancelled = [this, g = s.generation] { return generation_.load() != g; };

  auto tile = std::make_shared<Tile>();
  tile->key = key;
  tile->generation = s.generation;
  tile->buffer = render_snapshot(s, pyramid_.tile_grid(key), cancelled);
  StretchBounds bounds;
  if (s.stretch) {
    bounds = *s.stretch;
  } else {
    // Overview of the whole collection with the same loaded bands.
    const PixelBuffer overview = render_snapshot(s, pyramid_.level_grid(0), cancelled);
    bounds = buffer_stretch(overview, s.params.stretch);
  }
  tile->rgba = to_rgba(tile->buffer, bounds);
  tile->covered = tile->buffer.count(Coverage::covered);
  tile->pending = tile->buffer.count(Coverage::pending);
  if (cancelled()) throw CancelledError();
  cache_put(ck, tile);
  return tile;
}

HistogramResult Session::histogram(const ViewWindow& view) {
  if (static_cast<double>(view.width) * static_cast<double>(view.height) > options_.histogram_max_pixels)
    throw Error("viewport too large for a histogram");
  const Snapshot s = snapshot();
  const PixelBuffer buf = render_snapshot(s, PixelGrid::from_view(view), {});
  HistogramResult out;
  std::vector<std::vector<float>> values(buf.channels);
  for (std::size_t c = 0; c < buf.channels; ++c) {
    const auto ch = buf.channel(c);
    for (std::size_t i = 0; i < ch.size(); ++i) {
      if (buf.coverage[i] == Coverage::covered) values[c].push_back(ch[i]);
    }
    out.channels.push_back(Histogram::of(values[c]));
  }
  if (buf.count(Coverage::covered) == 0) return out;
  out.bounds = buffer_stretch(buf, s.params.stretch);
  bool changed = false;
  std::uint64_t gen = 0;
  {
    std::lock_guard lock(params_mutex_);
    if (generation_.load() == s.generation && (!stretch_ || stretch_->low != out.bounds->low ||
                                               stretch_->high != out.bounds->high)) {
      stretch_ = out.bounds;
      gen = ++generation_;
      changed = true;
    }
  }
  if (changed) publish("params", json{{"generation", gen}, {"reason", "stretch"}}.dump());
  return out;
}

std::optional<StretchBounds> Session::stretch_bounds() const {
  std::lock_guard lock(params_mutex_);
  return stretch_;
}

std::uint64_t Session::submit_export(ExportRequest request) {
  std::uint64_t id = 0;
  {
    std::lock_guard lock(jobs_mutex_);
    id = next_job_++;
    ExportJobStatus st;
    st.id = id;
    st.bands_total = request.bands.size();
    st.output = request.output.string();
    jobs_[id] = st;
    job_queue_.emplace_back(id, std::move(request));
  }
  jobs_cv_.notify_all();
  publish("export", json{{"id", id}, {"state", "queued"}}.dump());
  return id;
}

std::optional<ExportJobStatus> Session::export_status(std::uint64_t id) const {
  std::lock_guard lock(jobs_mutex_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second;
}

void Session::export_loop() {
  while (true) {
    std::pair<std::uint64_t, ExportRequest> job;
    {
      std::unique_lock lock(jobs_mutex_);
      jobs_cv_.wait(lock, [&] {
        std::lock_guard bl(bands_mutex_);
        return stopping_ || !job_queue_.empty();
      });
      {
        std::lock_guard bl(bands_mutex_);
        if (stopping_) return;
      }
      job = std::move(job_queue_.front());
      job_queue_.pop_front();
      jobs_[job.first].state = ExportJobStatus::State::running;
    }
    const std::uint64_t id = job.first;
    publish("export", json{{"id", id}, {"state", "running"}}.dump());
    ExportRequest& req = job.second;
    req.progress = [this, id](std::size_t done, std::size_t total) {
      {
        std::lock_guard lock(jobs_mutex_);
        jobs_[id].bands_done = done;
        jobs_[id].bands_total = total;
      }
      publish("export", json{{"id", id}, {"state", "running"}, {"done", done}, {"total", total}}.dump());
    };
    req.cancelled = [this] {
      std::lock_guard lock(bands_mutex_);
      return stopping_;
    };
    ExportJobStatus::State state = ExportJobStatus::State::done;
    std::string message;
    std::string output;
    try {
      const ExportResult r = export_cube(*collection_, req);
      output = r.header.string();
      message = "wrote " + std::to_string(r.bands) + " bands, " + std::to_string(r.grid.width) + " x " +
                std::to_string(r.grid.height);
    } catch (const CancelledError&) {
      state = ExportJobStatus::State::cancelled;
      message = "cancelled";
    } catch (const std::exception& e) {
      state = ExportJobStatus::State::failed;
      message = e.what();
    }
    {
      std::lock_guard lock(jobs_mutex_);
      auto& st = jobs_[id];
      st.state = state;
      st.message = message;
      if (!output.empty()) st.output = output;
    }
    publish("export", json{{"id", id}, {"state", std::string(to_string(state))}, {"message", message}}.dump());
  }
}

void Session::publish(std::string type, std::string data) {
  {
    std::lock_guard lock(events_mutex_);
    events_.push_back({next_event_++, std::move(type), std::move(data)});
    while (events_.size() > 4096) events_.pop_front();
  }
  events_cv_.notify_all();
}

std::vector<Event> Session::events_after(std::uint64_t after, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(events_mutex_);
  events_cv_.wait_for(lock, timeout, [&] { return !events_.empty() && events_.back().seq > after; });
  std::vector<Event> out;
  for (const auto& e : events_) {
    if (e.seq > after) out.push_back(e);
  }
  return out;
}

}  // namespace swathcube::service
