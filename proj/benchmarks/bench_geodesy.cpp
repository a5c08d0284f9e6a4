#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include <swathcube/geodesy.hpp>
#include <swathcube/orientation.hpp>

namespace {

using namespace swathcube;

std::vector<geodesy::GeodeticPoint> survey_points(std::size_t n) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(35.0, 35.2), lon(-90.1, -89.9);
  std::vector<geodesy::GeodeticPoint> pts(n);
  for (auto& p : pts) p = {lat(rng), lon(rng), 120};
  return pts;
}

void BM_UtmForward(benchmark::State& state) {
  const auto pts = survey_points(4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(geodesy::wgs84_to_utm(pts[i++ & 4095], 16));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_UtmForward);

void BM_UtmInverse(benchmark::State& state) {
  std::vector<geodesy::UtmCoordinate> utm;
  for (const auto& p : survey_points(4096)) utm.push_back(geodesy::wgs84_to_utm(p, 16));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(geodesy::utm_to_wgs84(utm[i++ & 4095]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_UtmInverse);

void BM_GridConvergence(benchmark::State& state) {
  const auto pts = survey_points(4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(geodesy::grid_convergence(pts[i++ & 4095], 16));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GridConvergence);

void BM_Slerp(benchmark::State& state) {
  const auto a = Orientation::from_euler_deg(2, -1, 30);
  const auto b = Orientation::from_euler_deg(-3, 2, 31.5);
  double t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(slerp(a, b, t));
    t = t > 0.99 ? 0.0 : t + 0.01;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Slerp);

}  // namespace
