#include "swathcube/render.hpp"

#include <algorithm>

#include "swathcube/error.hpp"

namespace swathcube {

PixelBuffer::PixelBuffer(std::size_t w, std::size_t h, std::size_t c, float fill)
    : width(w), height(h), channels(c), values(w * h * c, fill), coverage(w * h, Coverage::none) {}

std::size_t PixelBuffer::count(Coverage c) const {
  return static_cast<std::size_t>(std::count(coverage.begin(), coverage.end(), c));
}

void plan_coverage(const RasterPlan& plan, std::span<Coverage> coverage) {
  for (std::size_t i = 0; i < plan.entries.size(); ++i)
    coverage[i] = plan.entries[i].layer >= 0 ? Coverage::covered : Coverage::none;
}

void shade_channel(const RasterPlan& plan, std::span<const LayerBand> layers, float no_data,
                   std::span<float> out, std::span<Coverage> coverage) {
  const std::size_t n = plan.entries.size();
  if (out.size() != n) throw RenderError("output channel size does not match the plan");
  const bool track = !coverage.empty();
  // Source reads stride across lines once the output pixel is coarser than
  // the source sample, which defeats the hardware prefetcher; fetch ahead.
  constexpr std::size_t ahead = 32;
  for (std::size_t i = 0; i < n; ++i) {
    if (i + ahead < n) {
      const PlanEntry f = plan.entries[i + ahead];
      if (f.layer >= 0 && static_cast<std::size_t>(f.layer) < layers.size()) {
        const BandPlane* p = layers[static_cast<std::size_t>(f.layer)].plane;
        if (p != nullptr) __builtin_prefetch(p->values.data() + f.line * p->samples + f.sample);
      }
    }
    const PlanEntry e = plan.entries[i];
    if (e.layer < 0) {
      out[i] = no_data;
      continue;
    }
    const auto layer = static_cast<std::size_t>(e.layer);
    if (layer >= layers.size()) throw RenderError("plan refers to a layer without band data");
    const LayerBand& lb = layers[layer];
    if (lb.plane == nullptr) {
      out[i] = no_data;
      if (track) coverage[i] = Coverage::pending;
      continue;
    }
    const float raw = lb.plane->values[e.line * lb.plane->samples + e.sample];
    out[i] = lb.calibrator(raw, e.line, e.sample);
  }
}

PixelBuffer shade_plan(const RasterPlan& plan, std::span<const std::vector<LayerBand>> channels,
                       float no_data) {
  PixelBuffer buf(plan.grid.width, plan.grid.height, channels.size(), no_data);
  plan_coverage(plan, buf.coverage);
  for (std::size_t c = 0; c < channels.size(); ++c)
    shade_channel(plan, channels[c], no_data, buf.channel(c), buf.coverage);
  return buf;
}

PixelBuffer rasterize_mesh(const FootprintMesh& mesh, const PixelGrid& grid, const BandPlane& plane,
                           const BandCalibrator& calibrator, float no_data) {
  if (plane.samples != mesh.samples || plane.lines != mesh.lines)
    throw RenderError("band plane dimensions do not match the mesh");
  const FootprintMesh* layers[] = {&mesh};
  const RasterPlan plan = build_plan(layers, grid);
  const std::vector<std::vector<LayerBand>> channels = {{LayerBand{&plane, calibrator}}};
  return shade_plan(plan, channels, no_data);
}

PixelBuffer render_collection(std::span<const FootprintMesh* const> layers,
                              std::span<const std::vector<LayerBand>> channels, const PixelGrid& grid,
                              float no_data, unsigned jobs, const CancelCheck& cancelled) {
  for (const auto& ch : channels) {
    if (ch.size() != layers.size()) throw RenderError("every channel needs one band per layer");
  }
  const RasterPlan plan = build_plan(layers, grid, jobs, cancelled);
  return shade_plan(plan, channels, no_data);
}

StretchBounds buffer_stretch(const PixelBuffer& buffer, StretchMode mode, bool exact) {
  std::vector<std::vector<float>> values(buffer.channels);
  for (std::size_t c = 0; c < buffer.channels; ++c) {
    const auto ch = buffer.channel(c);
    for (std::size_t i = 0; i < ch.size(); ++i) {
      if (buffer.coverage[i] == Coverage::covered) values[c].push_back(ch[i]);
    }
  }
  std::vector<std::span<const float>> spans(values.begin(), values.end());
  return stretch_bounds(spans, mode, exact);
}

std::vector<std::uint8_t> to_rgba(const PixelBuffer& buffer, const StretchBounds& bounds) {
  if (buffer.channels == 0 || buffer.channels > 3) throw RenderError("RGBA output needs 1 to 3 channels");
  if (bounds.low.size() != buffer.channels) throw RenderError("stretch bounds do not match channel count");
  const std::size_t n = buffer.width * buffer.height;
  std::vector<std::uint8_t> rgba(n * 4, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t* px = &rgba[4 * i];
    switch (buffer.coverage[i]) {
      case Coverage::none:
        break;
      case Coverage::pending:
        px[0] = px[1] = px[2] = kPendingGray;
        px[3] = 255;
        break;
      case Coverage::covered:
        for (std::size_t k = 0; k < 3; ++k) {
          const std::size_t c = std::min(k, buffer.channels - 1);
          px[k] = stretch_byte(buffer.values[c * n + i], bounds.low[c], bounds.high[c]);
        }
        px[3] = 255;
        break;
    }
  }
  return rgba;
}

}  // namespace swathcube
