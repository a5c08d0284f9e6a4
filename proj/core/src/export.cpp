#include "swathcube/export.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <sstream>

#include "swathcube/cube_writer.hpp"
#include "swathcube/error.hpp"
#include "swathcube/log.hpp"
#include "swathcube/render.hpp"

namespace swathcube {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

MapInfo grid_map_info(const geodesy::LocalFrame& frame, const PixelGrid& grid) {
  MapInfo m;
  m.ref_x = 1.5;
  m.ref_y = 1.5;
  m.zone = frame.origin.zone;
  m.hemisphere = frame.origin.hemisphere;
  m.easting = frame.origin.easting + grid.center_east(0);
  m.northing = frame.origin.northing + grid.center_north(0);
  m.pixel_size_x = grid.pixel_east;
  m.pixel_size_y = grid.pixel_north;
  return m;
}

ExportResult export_cube(const Collection& collection, const ExportRequest& request) {
  if (collection.size() == 0) throw Error("empty collection");
  if (!(request.gsd > 0)) throw ConfigError({"gsd must be positive"});
  if (request.output.empty()) throw ConfigError({"no output path"});
  const std::size_t first = request.first_cube;
  const std::size_t last = std::min(request.last_cube, collection.size() - 1);
  if (first > last) throw ConfigError({"cube range is empty"});
  collection.check_mode(request.mode);

  std::vector<std::size_t> bands = request.bands;
  for (std::size_t b : bands) {
    if (b >= collection.bands()) throw ConfigError({"band " + std::to_string(b) + " does not exist"});
  }
  const auto& wl = collection.wavelengths();
  std::sort(bands.begin(), bands.end());
  bands.erase(std::unique(bands.begin(), bands.end()), bands.end());
  if (bands.empty()) throw ConfigError({"no bands selected"});

  ExportResult result;
  auto t = Clock::now();
  std::shared_ptr<const MeshSet> meshes =
      request.ground_height && *request.ground_height != collection.default_ground_height()
          ? collection.meshes_for(*request.ground_height)
          : collection.meshes();
  result.times.mesh = ms_since(t);

  t = Clock::now();
  const PixelGrid grid = PixelGrid::covering(meshes->bounds(first, last), request.gsd);
  std::vector<const FootprintMesh*> layers;
  for (std::size_t c = first; c <= last; ++c) layers.push_back(&meshes->meshes[c]);
  const RasterPlan plan = build_plan(layers, grid, request.jobs, request.cancelled);
  result.covered = plan.covered();
  result.times.render += ms_since(t);
  result.grid = grid;
  {
    std::ostringstream msg;
    msg << "output grid " << grid.width << " x " << grid.height << " at " << request.gsd << " m, "
        << result.covered << " covered pixels";
    log::info(msg.str());
  }

  CubeHeader h;
  h.samples = grid.width;
  h.lines = grid.height;
  h.bands = bands.size();
  h.data_type = DataType::f32;
  h.byte_order = native_byte_order();
  if (!wl.empty()) {
    for (std::size_t b : bands) h.wavelengths.push_back(wl[b]);
  }
  h.map_info = grid_map_info(collection.frame(), grid);
  h.data_ignore_value = request.no_data;
  h.description = std::string("swathcube export, mode ") + std::string(to_string(request.mode));
  const auto& f = collection.frame();
  h.extra.emplace_back("sc ned origin", "{" + format_double(f.origin.easting) + ", " +
                                            format_double(f.origin.northing) + ", " +
                                            std::to_string(f.origin.zone) + ", " +
                                            geodesy::to_string(f.origin.hemisphere) + ", " +
                                            format_double(f.origin_altitude) + "}");
  h.extra.emplace_back("sc ground height", format_double(meshes->ground_height));
  h.extra.emplace_back("sc processing mode", std::string(to_string(request.mode)));

  const std::filesystem::path base = output_base(request.output);
  CubeWriter writer(base, h);

  // Band planes for the next output band load while the current one shades.
  const std::size_t ncubes = last - first + 1;
  auto load = [&](std::size_t band) {
    std::vector<BandPlane> planes;
    planes.reserve(ncubes);
    for (std::size_t c = first; c <= last; ++c)
      planes.push_back(collection.provider().read_band(collection.handle(c), band));
    return planes;
  };
  std::vector<float> out(grid.pixel_count());
  std::future<std::vector<BandPlane>> pending = std::async(std::launch::async, load, bands[0]);
  for (std::size_t k = 0; k < bands.size(); ++k) {
    if (request.cancelled && request.cancelled()) throw CancelledError();
    t = Clock::now();
    std::vector<BandPlane> planes = pending.get();
    if (k + 1 < bands.size()) pending = std::async(std::launch::async, load, bands[k + 1]);
    result.times.load += ms_since(t);

    t = Clock::now();
    std::vector<LayerBand> lb(ncubes);
    for (std::size_t i = 0; i < ncubes; ++i)
      lb[i] = {&planes[i], collection.calibrator(first + i, bands[k], request.mode)};
    shade_channel(plan, lb, request.no_data, out);
    result.times.render += ms_since(t);

    t = Clock::now();
    writer.write_band(out);
    result.times.write += ms_since(t);
    if (request.progress) request.progress(k + 1, bands.size());
  }
  t = Clock::now();
  writer.finish();
  result.header = writer.header_path();
  result.data = writer.data_path();

  if (request.mask) {
    CubeHeader mh;
    mh.samples = grid.width;
    mh.lines = grid.height;
    mh.bands = 1;
    mh.data_type = DataType::u8;
    mh.byte_order = native_byte_order();
    mh.map_info = h.map_info;
    mh.description = "coverage mask: 1 covered, 0 no data";
    std::vector<float> mask(grid.pixel_count());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = plan.entries[i].layer >= 0 ? 1.0f : 0.0f;
    std::filesystem::path mask_base = base;
    mask_base += "_mask";
    try {
      CubeWriter mw(mask_base, mh);
      mw.write_band(mask);
      mw.finish();
      result.mask_header = mw.header_path();
    } catch (...) {
      std::error_code ec;
      std::filesystem::remove(result.header, ec);
      std::filesystem::remove(result.data, ec);
      throw;
    }
  }
  result.times.write += ms_since(t);
  result.bands = bands.size();
  return result;
}

}  // namespace swathcube
