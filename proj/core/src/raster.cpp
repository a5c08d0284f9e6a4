#include "swathcube/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swathcube/error.hpp"
#include "swathcube/parallel.hpp"

namespace swathcube {

PixelPosition transform_vertex(const MeshVertex& v, const ViewWindow& view) {
  const auto w = static_cast<double>(view.width);
  const auto h = static_cast<double>(view.height);
  return {(v.east - view.center_east) / view.scale_east * w + w / 2.0,
          (view.center_north - v.north) / view.scale_north * h + h / 2.0, v.depth};
}

PixelGrid PixelGrid::from_view(const ViewWindow& view) {
  if (view.width == 0 || view.height == 0 || !(view.scale_north > 0) || !(view.scale_east > 0))
    throw RenderError("view window needs positive scale and dimensions");
  PixelGrid g;
  g.origin_north = view.center_north + view.scale_north / 2.0;
  g.origin_east = view.center_east - view.scale_east / 2.0;
  g.pixel_north = view.pixel_north();
  g.pixel_east = view.pixel_east();
  g.width = view.width;
  g.height = view.height;
  return g;
}

PixelGrid PixelGrid::covering(const Bounds& bounds, double gsd) {
  if (!(gsd > 0) || !std::isfinite(gsd)) throw RenderError("ground sample distance must be positive");
  PixelGrid g;
  g.origin_north = bounds.max_north;
  g.origin_east = bounds.min_east;
  g.pixel_north = gsd;
  g.pixel_east = gsd;
  g.width = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(bounds.width() / gsd)));
  g.height = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(bounds.height() / gsd)));
  return g;
}

PixelGrid PixelGrid::crop(std::int64_t x, std::int64_t y, std::size_t w, std::size_t h) const {
  PixelGrid g = *this;
  g.offset_x += x;
  g.offset_y += y;
  g.width = w;
  g.height = h;
  return g;
}

double PixelGrid::center_north(std::size_t y) const {
  return origin_north - (static_cast<double>(offset_y + static_cast<std::int64_t>(y)) + 0.5) * pixel_north;
}

double PixelGrid::center_east(std::size_t x) const {
  return origin_east + (static_cast<double>(offset_x + static_cast<std::int64_t>(x)) + 0.5) * pixel_east;
}

void PixelGrid::validate() const {
  if (width == 0 || height == 0) throw RenderError("pixel grid has zero size");
  if (!(pixel_north > 0) || !(pixel_east > 0)) throw RenderError("pixel size must be positive");
  if (!std::isfinite(origin_north) || !std::isfinite(origin_east)) throw RenderError("pixel grid origin is not finite");
}

FixedPoint snap(const PixelGrid& grid, double north, double east) {
  constexpr double limit = 4503599627370496.0;  // 2^52
  const double fx = (east - grid.origin_east) / grid.pixel_east * static_cast<double>(kSubpixel);
  const double fy = (grid.origin_north - north) / grid.pixel_north * static_cast<double>(kSubpixel);
  if (!(std::abs(fx) < limit) || !(std::abs(fy) < limit))
    throw RenderError("vertex is too far from the pixel lattice origin");
  return {std::llround(fx), std::llround(fy)};
}

std::int64_t signed_area2(const std::array<FixedPoint, 3>& t) {
  return (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[1].y - t[0].y) * (t[2].x - t[0].x);
}

bool coverage_rule(std::array<FixedPoint, 3> t, FixedPoint p) {
  std::int64_t area = signed_area2(t);
  if (area == 0) return false;
  if (area < 0) std::swap(t[1], t[2]);
  for (int k = 0; k < 3; ++k) {
    const FixedPoint a = t[(k + 1) % 3];
    const FixedPoint b = t[(k + 2) % 3];
    const std::int64_t dx = b.x - a.x;
    const std::int64_t dy = b.y - a.y;
    const std::int64_t e = dx * (p.y - a.y) - dy * (p.x - a.x);
    if (e < 0 || (e == 0 && !edge_owned(dx, dy))) return false;
  }
  return true;
}

std::optional<TriangleSetup> setup_triangle(const FootprintMesh& mesh, std::size_t t,
                                            const PixelGrid& grid) {
  const auto idx = mesh.triangle(t);
  std::array<const MeshVertex*, 3> mv = {&mesh.vertices[idx[0]], &mesh.vertices[idx[1]],
                                         &mesh.vertices[idx[2]]};

  // Cheap reject in ground units before snapping.
  const double wx0 = static_cast<double>(grid.offset_x) - 1.0;
  const double wx1 = static_cast<double>(grid.offset_x + static_cast<std::int64_t>(grid.width)) + 1.0;
  const double wy0 = static_cast<double>(grid.offset_y) - 1.0;
  const double wy1 = static_cast<double>(grid.offset_y + static_cast<std::int64_t>(grid.height)) + 1.0;
  double lx0 = INFINITY, lx1 = -INFINITY, ly0 = INFINITY, ly1 = -INFINITY;
  for (const auto* v : mv) {
    const double lx = (v->east - grid.origin_east) / grid.pixel_east;
    const double ly = (grid.origin_north - v->north) / grid.pixel_north;
    lx0 = std::min(lx0, lx);
    lx1 = std::max(lx1, lx);
    ly0 = std::min(ly0, ly);
    ly1 = std::max(ly1, ly);
  }
  if (lx1 < wx0 || lx0 > wx1 || ly1 < wy0 || ly0 > wy1) return std::nullopt;

  TriangleSetup s;
  for (int k = 0; k < 3; ++k) s.v[k] = snap(grid, mv[k]->north, mv[k]->east);
  s.area2 = signed_area2(s.v);
  if (s.area2 == 0) return std::nullopt;
  if (s.area2 < 0) {
    std::swap(s.v[1], s.v[2]);
    std::swap(mv[1], mv[2]);
    s.area2 = -s.area2;
  }
  std::int64_t x0 = s.v[0].x, x1 = x0, y0 = s.v[0].y, y1 = y0;
  for (int k = 1; k < 3; ++k) {
    x0 = std::min(x0, s.v[k].x);
    x1 = std::max(x1, s.v[k].x);
    y0 = std::min(y0, s.v[k].y);
    y1 = std::max(y1, s.v[k].y);
  }
  if (x1 - x0 >= kMaxTriangleExtent || y1 - y0 >= kMaxTriangleExtent)
    throw RenderError("triangle for line " + std::to_string(mesh.triangle_line(t)) +
                      " spans too many pixels at this resolution");
  constexpr std::int64_t half = kSubpixel / 2;
  s.min_x = -floor_div(-(x0 - half), kSubpixel);
  s.max_x = floor_div(x1 - half, kSubpixel);
  s.min_y = -floor_div(-(y0 - half), kSubpixel);
  s.max_y = floor_div(y1 - half, kSubpixel);
  if (s.min_x > s.max_x || s.min_y > s.max_y) return std::nullopt;
  for (int k = 0; k < 3; ++k) {
    if (!(mv[k]->depth > 0)) throw RenderError("mesh vertex depth must be positive");
    s.depth[k] = mv[k]->depth;
    s.sample_times_depth[k] = static_cast<double>(mv[k]->sample) * mv[k]->depth;
  }
  s.line = mesh.triangle_line(t);
  return s;
}

void for_each_fragment(const FootprintMesh& mesh, const PixelGrid& grid,
                       const std::function<void(const Fragment&)>& fn) {
  grid.validate();
  const std::int64_t col0 = grid.offset_x;
  const std::int64_t col1 = col0 + static_cast<std::int64_t>(grid.width);
  const std::int64_t row0 = grid.offset_y;
  const std::int64_t row1 = row0 + static_cast<std::int64_t>(grid.height);
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto s = setup_triangle(mesh, t, grid);
    if (!s) continue;
    s->scan(row0, row1, col0, col1, [&](std::int64_t x, std::int64_t y, double sample, double depth) {
      fn({static_cast<std::size_t>(x - col0), static_cast<std::size_t>(y - row0), sample, s->line, depth});
    });
  }
}

std::size_t RasterPlan::covered() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const PlanEntry& e) { return e.layer >= 0; }));
}

RasterPlan build_plan(std::span<const FootprintMesh* const> layers, const PixelGrid& grid,
                      unsigned jobs, const CancelCheck& cancelled) {
  grid.validate();
  RasterPlan plan;
  plan.grid = grid;
  plan.entries.assign(grid.pixel_count(), PlanEntry{});

  struct Item {
    TriangleSetup setup;
    std::int32_t layer;
    std::uint32_t samples;
  };
  std::vector<Item> items;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const FootprintMesh* mesh = layers[l];
    if (mesh == nullptr) continue;
    for (std::size_t t = 0; t < mesh->triangle_count(); ++t) {
      if (auto s = setup_triangle(*mesh, t, grid))
        items.push_back({*s, static_cast<std::int32_t>(l), static_cast<std::uint32_t>(mesh->samples)});
    }
  }

  const std::size_t partitions = (grid.height + kPartitionRows - 1) / kPartitionRows;
  std::vector<std::vector<std::uint32_t>> buckets(partitions);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& s = items[i].setup;
    const std::int64_t r0 = std::max<std::int64_t>(s.min_y - grid.offset_y, 0);
    const std::int64_t r1 = std::min<std::int64_t>(s.max_y - grid.offset_y,
                                                   static_cast<std::int64_t>(grid.height) - 1);
    if (r0 > r1) continue;
    for (auto p = static_cast<std::size_t>(r0) / kPartitionRows; p <= static_cast<std::size_t>(r1) / kPartitionRows; ++p)
      buckets[p].push_back(static_cast<std::uint32_t>(i));
  }

  const std::int64_t col0 = grid.offset_x;
  const std::int64_t col1 = col0 + static_cast<std::int64_t>(grid.width);
  parallel_for(partitions, jobs, [&](std::size_t p) {
    if (cancelled && cancelled()) throw CancelledError();
    const std::int64_t row0 = grid.offset_y + static_cast<std::int64_t>(p * kPartitionRows);
    const std::int64_t row1 =
        std::min(row0 + static_cast<std::int64_t>(kPartitionRows),
                 grid.offset_y + static_cast<std::int64_t>(grid.height));
    for (std::uint32_t i : buckets[p]) {
      const Item& item = items[i];
      item.setup.scan(row0, row1, col0, col1, [&](std::int64_t x, std::int64_t y, double sample, double) {
        PlanEntry& e = plan.entries[static_cast<std::size_t>(y - grid.offset_y) * grid.width +
                                    static_cast<std::size_t>(x - col0)];
        e.layer = item.layer;
        e.line = item.setup.line;
        e.sample = sample_index(sample, item.samples);
      });
    }
  });
  if (cancelled && cancelled()) throw CancelledError();
  return plan;
}

}  // namespace swathcube
