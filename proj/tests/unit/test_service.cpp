#include <chrono>
#include <thread>

#include <gtest/gtest.h>

#include <swathcube/error.hpp>
#include <swathcube/service/session.hpp>

#include "json.hpp"
#include "unit/fixture.hpp"

namespace {

using namespace swathcube;
using namespace swathcube::service;
using namespace std::chrono_literals;
using testing_support::Flight;
using testing_support::small_plan;

std::shared_ptr<Collection> open(const Flight& f, SourceOpener opener = {}) {
  auto o = f.collection_options();
  o.opener = std::move(opener);
  return std::make_shared<Collection>(std::move(o));
}

class SlowSource : public ByteSource {
 public:
  SlowSource(std::unique_ptr<ByteSource> inner, std::chrono::milliseconds delay)
      : inner_(std::move(inner)), delay_(delay) {}
  std::uint64_t size() const override { return inner_->size(); }
  void read_at(std::uint64_t offset, std::span<std::byte> out) const override {
    std::this_thread::sleep_for(delay_);
    inner_->read_at(offset, out);
  }

 private:
  std::unique_ptr<ByteSource> inner_;
  std::chrono::milliseconds delay_;
};

TEST(Pyramid, LevelsAndTiles) {
  const Bounds b{0, 100, 0, 50};
  const auto p = Pyramid::over(b, 0.1);
  EXPECT_EQ(p.extent, 100.0);
  EXPECT_EQ(p.max_zoom, 2);  // 100 / (256 * 0.1) = 3.9 -> 2 levels
  EXPECT_DOUBLE_EQ(p.pixel_size(2), 100.0 / 1024.0);
  const auto g = p.tile_grid({1, 1, 0});
  EXPECT_EQ(g.offset_x, 256);
  EXPECT_EQ(g.width, kTileSize);
  EXPECT_TRUE(p.contains({2, 3, 3}));
  EXPECT_FALSE(p.contains({2, 4, 0}));
  EXPECT_FALSE(p.contains({3, 0, 0}));
  EXPECT_FALSE(p.contains({-1, 0, 0}));
}

TEST(Session, DefaultsFromCollection) {
  Flight f(small_plan());
  Session s(open(f));
  const auto p = s.params();
  EXPECT_EQ(p.wavelengths.size(), 3u);
  EXPECT_EQ(p.mode, ProcessingMode::relative);
  EXPECT_EQ(p.last_cube, 1u);
  EXPECT_EQ(s.generation(), 1u);
  EXPECT_EQ(s.cube_status(0), LoadStatus::not_loaded);
  EXPECT_EQ(default_wavelengths({400, 500}), (std::vector<double>{400}));
}

TEST(Session, ParamsValidateAtomically) {
  Flight f(small_plan());
  Session s(open(f));
  ParamsUpdate bad;
  bad.wavelengths = std::vector<double>{450, 500, 550, 600};
  bad.mode = ProcessingMode::radiance;  // no calibration
  bad.stretch = StretchMode::none;
  try {
    s.set_params(bad);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.problems().size(), 2u);
  }
  EXPECT_EQ(s.generation(), 1u);
  EXPECT_EQ(s.params().stretch, StretchMode::per_channel);
  ParamsUpdate range;
  range.first_cube = 1;
  range.last_cube = 0;
  EXPECT_THROW(s.set_params(range), ConfigError);

  ParamsUpdate ok;
  ok.wavelengths = std::vector<double>{550};
  ok.ground_height = 90.0;
  EXPECT_EQ(s.set_params(ok), 2u);
  EXPECT_EQ(s.params().ground_height, 90.0);
}

TEST(Session, TilesMatchRenderView) {
  Flight f(small_plan());
  Session s(open(f), SessionOptions{.max_zoom = 3});
  s.start();
  ASSERT_TRUE(s.wait_until_loaded(20s));
  const auto& py = s.pyramid();
  const auto level = s.render_view(py.level_grid(2));
  for (std::int64_t ty = 0; ty < 4; ++ty)
    for (std::int64_t tx = 0; tx < 4; ++tx) {
      const auto tile = s.tile({2, tx, ty});
      ASSERT_EQ(tile->buffer.channels, 3u);
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t y = 0; y < kTileSize; ++y)
          for (std::size_t x = 0; x < kTileSize; ++x)
            ASSERT_EQ(tile->buffer.at(c, x, y),
                      level.at(c, static_cast<std::size_t>(tx) * kTileSize + x, static_cast<std::size_t>(ty) * kTileSize + y));
    }
  EXPECT_EQ(s.tile({2, 0, 0}).get(), s.tile({2, 0, 0}).get());  // cached
  EXPECT_GT(s.cached_tiles(), 0u);
  EXPECT_THROW(s.tile({9, 0, 0}), Error);
}

TEST(Session, RapidUpdatesCancelSupersededTiles) {
  Flight f(small_plan());
  Session s(open(f));
  s.start();
  ASSERT_TRUE(s.wait_until_loaded(20s));
  const std::uint64_t first = s.generation();
  for (int i = 0; i < 10; ++i) {
    ParamsUpdate u;
    u.stretch = i % 2 ? StretchMode::common : StretchMode::none;
    s.set_params(u);
  }
  EXPECT_EQ(s.generation(), first + 10);
  EXPECT_THROW(s.tile({0, 0, 0}, first), CancelledError);
  EXPECT_THROW(s.tile({0, 0, 0}, first + 11), Error);
  EXPECT_NO_THROW(s.tile({0, 0, 0}, first + 10));

  // An update that lands while a tile is rendering cancels that render.
  s.before_render = [&](const TileKey&, std::uint64_t) {
    ParamsUpdate u;
    u.stretch = StretchMode::per_channel;
    s.set_params(u);
  };
  EXPECT_THROW(s.tile({1, 0, 0}, s.generation()), CancelledError);
  s.before_render = nullptr;
}

TEST(Session, SlowStorageNeverBlocksParamsOrTiles) {
  Flight f(small_plan());
  auto slow = [](const std::filesystem::path& p) -> std::unique_ptr<ByteSource> {
    return std::make_unique<SlowSource>(open_file_source(p), 400ms);
  };
  Session s(open(f, slow));
  s.start();
  const auto t0 = std::chrono::steady_clock::now();
  ParamsUpdate u;
  u.stretch = StretchMode::common;
  s.set_params(u);
  const auto tile = s.tile({0, 0, 0});
  (void)s.params();
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  EXPECT_LT(elapsed, 300ms);
  EXPECT_GT(tile->pending, 0u);
  EXPECT_EQ(tile->covered, 0u);
  EXPECT_NE(s.cube_status(0), LoadStatus::ready);
  ASSERT_TRUE(s.wait_until_loaded(30s));
  EXPECT_EQ(s.cube_status(1), LoadStatus::ready);
  const auto later = s.tile({0, 0, 0});
  EXPECT_EQ(later->pending, 0u);
  EXPECT_GT(later->covered, 0u);
}

TEST(Session, HistogramSetsStretchAndBumpsGeneration) {
  Flight f(small_plan());
  Session s(open(f));
  s.start();
  ASSERT_TRUE(s.wait_until_loaded(20s));
  const auto b = s.collection().meshes()->bounds();
  ViewWindow view{0.5 * (b.min_north + b.max_north), 0.5 * (b.min_east + b.max_east), b.height(), b.width(), 200, 200};
  const auto gen = s.generation();
  const auto h = s.histogram(view);
  ASSERT_EQ(h.channels.size(), 3u);
  ASSERT_TRUE(h.bounds.has_value());
  EXPECT_GT(h.channels[0].total(), 0u);
  EXPECT_EQ(s.generation(), gen + 1);
  ASSERT_TRUE(s.stretch_bounds().has_value());
  s.histogram(view);  // same bounds, no new generation
  EXPECT_EQ(s.generation(), gen + 1);
  ViewWindow empty{1e5, 1e5, 1, 1, 10, 10};
  EXPECT_FALSE(s.histogram(empty).bounds.has_value());
  ViewWindow huge{0, 0, 1, 1, 100000, 100000};
  EXPECT_THROW(s.histogram(huge), Error);
}

TEST(Session, ExportJobsRunInBackground) {
  Flight f(small_plan());
  Session s(open(f));
  ExportRequest r;
  r.bands = {0};
  r.gsd = 0.3;
  r.mode = ProcessingMode::raw;
  r.output = f.dir / "bg";
  const auto id = s.submit_export(r);
  ExportRequest bad = r;
  bad.mode = ProcessingMode::radiance;
  const auto bad_id = s.submit_export(bad);
  const auto deadline = std::chrono::steady_clock::now() + 30s;
  while (std::chrono::steady_clock::now() < deadline) {
    const auto st = s.export_status(bad_id);
    if (st && st->state == ExportJobStatus::State::failed) break;
    std::this_thread::sleep_for(20ms);
  }
  EXPECT_EQ(s.export_status(id)->state, ExportJobStatus::State::done);
  EXPECT_EQ(s.export_status(id)->bands_done, 1u);
  EXPECT_EQ(s.export_status(bad_id)->state, ExportJobStatus::State::failed);
  EXPECT_FALSE(s.export_status(999).has_value());
  EXPECT_TRUE(std::filesystem::exists(f.dir / "bg.hdr"));
}

TEST(Session, EventsAreSequenced) {
  Flight f(small_plan());
  Session s(open(f));
  s.start();
  ASSERT_TRUE(s.wait_until_loaded(20s));
  // Readiness is published just after the band is marked ready.
  std::vector<Event> events;
  std::size_t ready = 0;
  const auto deadline = std::chrono::steady_clock::now() + 10s;
  while (ready < 6 && std::chrono::steady_clock::now() < deadline) {
    events = s.events_after(0, 100ms);
    ready = 0;
    for (const auto& e : events) {
      if (e.type == "band") ready += nlohmann::json::parse(e.data)["status"] == "ready";
    }
  }
  EXPECT_EQ(ready, 6u);  // 2 cubes x 3 bands
  ASSERT_FALSE(events.empty());
  for (std::size_t i = 1; i < events.size(); ++i) EXPECT_EQ(events[i].seq, events[i - 1].seq + 1);
  const auto last = events.back().seq;
  ParamsUpdate u;
  u.stretch = StretchMode::none;
  s.set_params(u);
  const auto next = s.events_after(last, 1s);
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(next[0].type, "params");
  EXPECT_TRUE(s.events_after(next[0].seq, 10ms).empty());
}

}  // namespace
