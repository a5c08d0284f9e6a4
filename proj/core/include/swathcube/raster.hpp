#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "swathcube/mesh.hpp"

namespace swathcube {

/// A north-up view: center in the collection frame, ground extent per axis,
/// and buffer size in pixels.
struct ViewWindow {
  double center_north = 0;
  double center_east = 0;
  double scale_north = 0;  // meters covered by the full buffer height
  double scale_east = 0;   // meters covered by the full buffer width
  std::size_t width = 0;
  std::size_t height = 0;

  double pixel_north() const noexcept { return scale_north / static_cast<double>(height); }
  double pixel_east() const noexcept { return scale_east / static_cast<double>(width); }
};

struct PixelPosition {
  double x = 0;
  double y = 0;
  double depth = 0;
};

/// x = (east - center_east) / scale_east * width + width / 2, and y likewise
/// from north with the axis flipped so that north is up.
PixelPosition transform_vertex(const MeshVertex& v, const ViewWindow& view);

/// A window into an infinite pixel lattice. Vertices are snapped in lattice
/// coordinates, so any two windows of the same lattice agree bit for bit on
/// the pixels they share.
struct PixelGrid {
  double origin_north = 0;  // top edge of lattice row 0
  double origin_east = 0;   // left edge of lattice column 0
  double pixel_north = 0;
  double pixel_east = 0;
  std::int64_t offset_x = 0;  // lattice column of window column 0
  std::int64_t offset_y = 0;  // lattice row of window row 0
  std::size_t width = 0;
  std::size_t height = 0;

  static PixelGrid from_view(const ViewWindow& view);
  /// Square pixels of size gsd covering the bounds; the lattice origin is the
  /// bounds' north-west corner.
  static PixelGrid covering(const Bounds& bounds, double gsd);

  /// Sub-window of the same lattice; x, y are relative to this window.
  PixelGrid crop(std::int64_t x, std::int64_t y, std::size_t w, std::size_t h) const;

  std::size_t pixel_count() const noexcept { return width * height; }
  /// Ground coordinates of the center of window pixel (x, y).
  double center_north(std::size_t y) const;
  double center_east(std::size_t x) const;
  void validate() const;
};

inline constexpr int kSubpixelBits = 8;
inline constexpr std::int64_t kSubpixel = std::int64_t{1} << kSubpixelBits;
/// Largest triangle extent (in subpixel units) the exact edge arithmetic
/// supports.
inline constexpr std::int64_t kMaxTriangleExtent = std::int64_t{1} << 30;

struct FixedPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(FixedPoint, FixedPoint) = default;
};

/// Lattice position in 1/256 pixel units, rounded to nearest. Throws
/// RenderError for non-finite or out-of-range input.
FixedPoint snap(const PixelGrid& grid, double north, double east);

inline FixedPoint pixel_center(std::int64_t lattice_x, std::int64_t lattice_y) {
  return {lattice_x * kSubpixel + kSubpixel / 2, lattice_y * kSubpixel + kSubpixel / 2};
}

/// Edge a->b owns points lying exactly on it when dy < 0, or dy == 0 and
/// dx > 0. Exactly one of an edge and its reverse owns.
constexpr bool edge_owned(std::int64_t dx, std::int64_t dy) { return dy < 0 || (dy == 0 && dx > 0); }

/// Twice the signed area; positive means the rasterizer's winding.
std::int64_t signed_area2(const std::array<FixedPoint, 3>& t);

/// The coverage rule: p is covered when it is strictly inside, or on an edge
/// the triangle owns. Orientation is normalized first; zero-area triangles
/// cover nothing.
bool coverage_rule(std::array<FixedPoint, 3> t, FixedPoint p);

/// Integer floor division for any sign.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

/// Snapped, positively wound triangle with the per-vertex values needed for
/// perspective-correct interpolation. The triangle lies on the ground while
/// the sample coordinate is linear on the sensor, so barycentric weights are
/// scaled by depth (a GPU would divide by w = 1 / depth).
struct TriangleSetup {
  std::array<FixedPoint, 3> v{};
  std::array<double, 3> depth{};
  std::array<double, 3> sample_times_depth{};
  std::int64_t area2 = 0;
  std::uint32_t line = 0;
  std::int64_t min_x = 0, max_x = 0;  // lattice columns whose centers may be covered
  std::int64_t min_y = 0, max_y = 0;  // lattice rows

  /// Calls fn(lattice_x, lattice_y, sample, depth) for every covered pixel
  /// center with lattice row in [row0, row1) and column in [col0, col1).
  template <class Fn>
  void scan(std::int64_t row0, std::int64_t row1, std::int64_t col0, std::int64_t col1, Fn&& fn) const;
};

/// Returns nothing for zero-area triangles or ones that miss the window.
std::optional<TriangleSetup> setup_triangle(const FootprintMesh& mesh, std::size_t t,
                                            const PixelGrid& grid);

struct Fragment {
  std::size_t x = 0;  // window column
  std::size_t y = 0;  // window row
  double sample = 0;  // continuous, [0, S]
  std::uint32_t line = 0;
  double depth = 0;
};

/// Visits the fragments of one mesh inside the window, triangle by triangle.
void for_each_fragment(const FootprintMesh& mesh, const PixelGrid& grid,
                       const std::function<void(const Fragment&)>& fn);

/// floor(sample) clamped to [0, samples - 1].
inline std::uint32_t sample_index(double sample, std::size_t samples) {
  if (!(sample > 0)) return 0;
  const double last = static_cast<double>(samples - 1);
  return sample >= last ? static_cast<std::uint32_t>(samples - 1) : static_cast<std::uint32_t>(sample);
}

/// Source of a covered pixel. layer < 0 means uncovered.
struct PlanEntry {
  std::int32_t layer = -1;
  std::uint32_t line = 0;
  std::uint32_t sample = 0;
};

/// Pixel-to-cube lookup for a whole window, resolved in painter's order:
/// later layers overwrite earlier ones. Shading any band is then a gather.
struct RasterPlan {
  PixelGrid grid;
  std::vector<PlanEntry> entries;  // row-major, width * height

  const PlanEntry& at(std::size_t x, std::size_t y) const { return entries[y * grid.width + x]; }
  std::size_t covered() const;
};

inline constexpr std::size_t kPartitionRows = 32;

/// Polled between row partitions; returning true aborts with CancelledError.
using CancelCheck = std::function<bool()>;

/// Rasterizes every layer's mesh into one plan. Output rows are split into
/// partitions of kPartitionRows rows and each partition is filled by one
/// worker, so results do not depend on `jobs`.
RasterPlan build_plan(std::span<const FootprintMesh* const> layers, const PixelGrid& grid,
                      unsigned jobs = 1, const CancelCheck& cancelled = {});

template <class Fn>
void TriangleSetup::scan(std::int64_t row0, std::int64_t row1, std::int64_t col0, std::int64_t col1,
                         Fn&& fn) const {
  row0 = std::max(row0, min_y);
  row1 = std::min(row1, max_y + 1);
  col0 = std::max(col0, min_x);
  col1 = std::min(col1, max_x + 1);
  if (row0 >= row1 || col0 >= col1) return;

  // Edge k runs from v[k+1] to v[k+2] and weighs vertex k.
  std::array<std::int64_t, 3> ax{}, ay{}, dx{}, dy{}, bias{};
  for (int k = 0; k < 3; ++k) {
    const FixedPoint& a = v[(k + 1) % 3];
    const FixedPoint& b = v[(k + 2) % 3];
    ax[k] = a.x;
    ay[k] = a.y;
    dx[k] = b.x - a.x;
    dy[k] = b.y - a.y;
    bias[k] = edge_owned(dx[k], dy[k]) ? 0 : -1;
  }
  const std::int64_t px0 = col0 * kSubpixel + kSubpixel / 2;
  const std::int64_t span_max = col1 - col0 - 1;
  for (std::int64_t row = row0; row < row1; ++row) {
    const std::int64_t py = row * kSubpixel + kSubpixel / 2;
    std::array<std::int64_t, 3> e0{};
    std::int64_t lo = 0;
    std::int64_t hi = span_max;
    for (int k = 0; k < 3 && lo <= hi; ++k) {
      e0[k] = dx[k] * (py - ay[k]) - dy[k] * (px0 - ax[k]);
      // Covered columns satisfy e0 + bias - dy * 256 * j >= 0.
      const std::int64_t b = e0[k] + bias[k];
      const std::int64_t step = dy[k] * kSubpixel;
      if (step == 0) {
        if (b < 0) hi = -1;
      } else if (step > 0) {
        if (b < 0) {
          hi = -1;
        } else {
          hi = std::min(hi, b / step);
        }
      } else {
        if (b < 0) lo = std::max(lo, floor_div(-b - step - 1, -step));
      }
    }
    for (std::int64_t j = lo; j <= hi; ++j) {
      double den = 0;
      double num = 0;
      for (int k = 0; k < 3; ++k) {
        const auto e = static_cast<double>(e0[k] - dy[k] * kSubpixel * j);
        den += e * depth[k];
        num += e * sample_times_depth[k];
      }
      fn(col0 + j, row, num / den, den / static_cast<double>(area2));
    }
  }
}

}  // namespace swathcube
