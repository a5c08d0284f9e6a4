#include <cmath>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include <swathcube/mesh.hpp>
#include <swathcube/raster.hpp>
#include <swathcube/render.hpp>

namespace {

using namespace swathcube;

constexpr std::size_t kSamples = 900;
constexpr std::size_t kLines = 1000;

/// One cube flown north at 40 m with a few degrees of smooth wobble.
PoseTrack wobbly_track(std::size_t lines) {
  std::vector<geodesy::NedPoint> pos;
  std::vector<Orientation> ori;
  for (std::size_t i = 0; i < lines; ++i) {
    const double t = static_cast<double>(i) / 249.0;
    pos.push_back({10.0 * t, 0.0, -40.0});
    ori.push_back(Orientation::from_euler_deg(3 * std::sin(2.1 * t), 2 * std::sin(1.3 * t + 1),
                                              2.5 * std::sin(0.7 * t + 2)));
  }
  return PoseTrack(pos, ori);
}

const FootprintMesh& mesh() {
  static const FootprintMesh m = build_mesh(wobbly_track(kLines), kSamples, project_fov(47.5), {0.0});
  return m;
}

/// Nominal across-track sample size at 40 m.
double nominal_gsd() { return 2 * 40 * std::tan(47.5 * std::numbers::pi / 360) / static_cast<double>(kSamples); }

void BM_BuildMesh(benchmark::State& state) {
  const auto track = wobbly_track(kLines);
  const auto fov = project_fov(47.5);
  for (auto _ : state) benchmark::DoNotOptimize(build_mesh(track, kSamples, fov, {0.0}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kLines));
}
BENCHMARK(BM_BuildMesh)->Unit(benchmark::kMillisecond);

void BM_BuildPlan(benchmark::State& state) {
  const FootprintMesh* layers[] = {&mesh()};
  const auto grid = PixelGrid::covering(mesh_bounds(mesh()), nominal_gsd() * static_cast<double>(state.range(0)) / 100);
  for (auto _ : state) benchmark::DoNotOptimize(build_plan(layers, grid, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.pixel_count()));
}
BENCHMARK(BM_BuildPlan)->Arg(100)->Arg(150)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ShadeChannel(benchmark::State& state) {
  const FootprintMesh* layers[] = {&mesh()};
  const auto grid = PixelGrid::covering(mesh_bounds(mesh()), nominal_gsd() * static_cast<double>(state.range(0)) / 100);
  const RasterPlan plan = build_plan(layers, grid, 1);
  BandPlane plane;
  plane.samples = kSamples;
  plane.lines = kLines;
  plane.values.resize(kSamples * kLines);
  for (std::size_t i = 0; i < plane.values.size(); ++i) plane.values[i] = static_cast<float>(i % 4093);
  const LayerBand bands[] = {{&plane, BandCalibrator{}}};
  std::vector<float> out(grid.pixel_count());
  for (auto _ : state) {
    shade_channel(plan, bands, 0.0f, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.pixel_count()));
}
BENCHMARK(BM_ShadeChannel)->Arg(100)->Arg(150)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
