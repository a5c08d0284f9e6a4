#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "swathcube/calibration.hpp"
#include "swathcube/cube_provider.hpp"
#include "swathcube/raster.hpp"
#include "swathcube/stretch.hpp"

namespace swathcube {

/// pending marks pixels whose cube has no band data loaded yet.
enum class Coverage : std::uint8_t { none = 0, covered = 1, pending = 2 };

struct PixelBuffer {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 0;
  std::vector<float> values;        // channel-major planes of width * height
  std::vector<Coverage> coverage;  // width * height

  PixelBuffer() = default;
  PixelBuffer(std::size_t w, std::size_t h, std::size_t c, float fill);

  std::span<float> channel(std::size_t c) { return {values.data() + c * width * height, width * height}; }
  std::span<const float> channel(std::size_t c) const {
    return {values.data() + c * width * height, width * height};
  }
  float at(std::size_t c, std::size_t x, std::size_t y) const { return values[(c * height + y) * width + x]; }
  Coverage coverage_at(std::size_t x, std::size_t y) const { return coverage[y * width + x]; }
  std::size_t count(Coverage c) const;
};

/// Band data and calibration for one layer of one channel. A null plane
/// means the band is not loaded.
struct LayerBand {
  const BandPlane* plane = nullptr;
  BandCalibrator calibrator;
};

/// Fills one channel by gathering through the plan. Uncovered and pending
/// pixels get no_data. Returns nothing; coverage is updated when given
/// (pending wins over covered).
void shade_channel(const RasterPlan& plan, std::span<const LayerBand> layers, float no_data,
                   std::span<float> out, std::span<Coverage> coverage = {});

/// Coverage of a plan before shading: covered where some layer owns the pixel.
void plan_coverage(const RasterPlan& plan, std::span<Coverage> coverage);

/// Single mesh, single band.
PixelBuffer rasterize_mesh(const FootprintMesh& mesh, const PixelGrid& grid, const BandPlane& plane,
                           const BandCalibrator& calibrator, float no_data = 0.0f);

/// Layers in capture order; channels[c][l] is channel c's band for layer l.
PixelBuffer render_collection(std::span<const FootprintMesh* const> layers,
                              std::span<const std::vector<LayerBand>> channels, const PixelGrid& grid,
                              float no_data = 0.0f, unsigned jobs = 1, const CancelCheck& cancelled = {});

PixelBuffer shade_plan(const RasterPlan& plan, std::span<const std::vector<LayerBand>> channels,
                       float no_data = 0.0f);

/// Stretch bounds over covered pixels only.
StretchBounds buffer_stretch(const PixelBuffer& buffer, StretchMode mode, bool exact = false);

/// RGBA8 image: up to three channels (a single channel is shown as gray),
/// uncovered pixels transparent, pending pixels opaque gray.
std::vector<std::uint8_t> to_rgba(const PixelBuffer& buffer, const StretchBounds& bounds);

inline constexpr std::uint8_t kPendingGray = 128;

}  // namespace swathcube
