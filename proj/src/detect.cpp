#include "mvhull/detect.hpp"

#include <algorithm>

namespace mvhull {

std::vector<Detection> decode_detections(const BevMap& heatmap,
                                         const GridSpec& grid,
                                         double threshold, int nms_radius,
                                         const BevMap* offset_map) {
  if (heatmap.channels() != 1)
    throw DimensionMismatch("detection heatmap must have one channel");
  if (heatmap.height() != grid.ny || heatmap.width() != grid.nx)
    throw DimensionMismatch("heatmap dims do not match the grid");
  if (offset_map) {
    if (offset_map->channels() != 2)
      throw DimensionMismatch("offset map must have two channels");
    if (offset_map->height() != grid.ny || offset_map->width() != grid.nx)
      throw DimensionMismatch("offset map dims do not match the grid");
  }
  if (nms_radius < 1) throw ConfigError("nms radius must be >= 1");

  const int ny = grid.ny, nx = grid.nx;
  std::vector<std::pair<long, Detection>> peaks;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const float value = heatmap.at(0, iy, ix);
      if (value < threshold) continue;
      const long lin = long(iy) * nx + ix;
      bool peak = true;
      const int y0 = std::max(iy - nms_radius, 0);
      const int y1 = std::min(iy + nms_radius, ny - 1);
      const int x0 = std::max(ix - nms_radius, 0);
      const int x1 = std::min(ix + nms_radius, nx - 1);
      for (int wy = y0; wy <= y1 && peak; ++wy) {
        for (int wx = x0; wx <= x1; ++wx) {
          const float other = heatmap.at(0, wy, wx);
          if (other > value ||
              (other == value && long(wy) * nx + wx < lin)) {
            peak = false;
            break;
          }
        }
      }
      if (!peak) continue;

      Detection det;
      double dx = 0.0, dy = 0.0;
      if (offset_map) {
        dx = offset_map->at(0, iy, ix);
        dy = offset_map->at(1, iy, ix);
      }
      det.position = {grid.origin.x() + (ix + 0.5 + dx) * grid.cell_xy,
                      grid.origin.y() + (iy + 0.5 + dy) * grid.cell_xy};
      det.score = value;
      peaks.emplace_back(lin, det);
    }
  }

  std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) {
    if (a.second.score != b.second.score) return a.second.score > b.second.score;
    return a.first < b.first;
  });
  std::vector<Detection> out;
  out.reserve(peaks.size());
  for (auto& [lin, det] : peaks) out.push_back(det);
  return out;
}

}  // namespace mvhull
