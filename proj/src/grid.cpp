#include "mvhull/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mvhull {

void validate_grid(const GridSpec& grid) {
  if (!(grid.cell_xy > 0.0) || !(grid.cell_z > 0.0))
    throw ConfigError("grid cell sizes must be positive");
  if (grid.nx < 1 || grid.ny < 1 || grid.nz < 1)
    throw ConfigError("grid cell counts must be >= 1");
  if (grid.voxel_count() > std::numeric_limits<std::int32_t>::max())
    throw ConfigError("grid voxel count exceeds addressable size");
}

namespace {

GridSpec benchmark_grid(int ny_full, int nx_full, int factor,
                        const char* which) {
  if (factor < 1) throw InvalidFactor("coarsening factor must be >= 1");
  if (ny_full % factor != 0 || nx_full % factor != 0)
    throw NonDividingFactor(std::string(which) + " grid dims not divisible by factor " +
                            std::to_string(factor));
  GridSpec g;
  g.origin = Eigen::Vector3d::Zero();
  g.cell_xy = 0.025 * factor;
  g.cell_z = 0.25;
  g.nx = nx_full / factor;
  g.ny = ny_full / factor;
  g.nz = 8;
  return g;
}

}  // namespace

GridSpec wildtrack_grid(int factor) {
  return benchmark_grid(480, 1440, factor, "wildtrack");
}

GridSpec multiviewx_grid(int factor) {
  return benchmark_grid(640, 1000, factor, "multiviewx");
}

Eigen::Vector3d voxel_center(const GridSpec& grid, const VoxelIndex& idx) {
  if (idx.ix < 0 || idx.ix >= grid.nx || idx.iy < 0 || idx.iy >= grid.ny ||
      idx.iz < 0 || idx.iz >= grid.nz)
    throw IndexOutOfGrid("voxel index outside grid");
  return grid.origin + Eigen::Vector3d((idx.ix + 0.5) * grid.cell_xy,
                                       (idx.iy + 0.5) * grid.cell_xy,
                                       (idx.iz + 0.5) * grid.cell_z);
}

std::optional<VoxelIndex> world_to_cell(const GridSpec& grid,
                                        const Eigen::Vector3d& point) {
  const Eigen::Vector3d rel = point - grid.origin;
  const double fx = std::floor(rel.x() / grid.cell_xy);
  const double fy = std::floor(rel.y() / grid.cell_xy);
  const double fz = std::floor(rel.z() / grid.cell_z);
  if (fx < 0 || fx >= grid.nx || fy < 0 || fy >= grid.ny || fz < 0 || fz >= grid.nz)
    return std::nullopt;
  return VoxelIndex{int(fy), int(fz), int(fx)};
}

}  // namespace mvhull
