#pragma once

#include <Eigen/Dense>
#include <optional>

#include "mvhull/errors.hpp"

namespace mvhull {

/// Axis-aligned voxel grid over the ground plane. X counts nx cells of
/// cell_xy meters, Y counts ny, Z counts nz cells of cell_z meters; the
/// origin is the world position of the minimum corner. Ground cells are
/// half-open [min, max) so each world point maps to exactly one cell.
struct GridSpec {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  double cell_xy = 1.0;
  double cell_z = 1.0;
  int nx = 1;
  int ny = 1;
  int nz = 1;

  double extent_x() const { return nx * cell_xy; }
  double extent_y() const { return ny * cell_xy; }
  double extent_z() const { return nz * cell_z; }
  std::int64_t voxel_count() const {
    return std::int64_t(nx) * ny * nz;
  }
};

/// Y-major voxel index matching the Y x Z x X volume layout.
struct VoxelIndex {
  int iy = 0;
  int iz = 0;
  int ix = 0;

  bool operator==(const VoxelIndex&) const = default;
};

void validate_grid(const GridSpec& grid);

/// 12 m x 36 m ground plane at 2.5 cm cells (480 x 1440), vertical extent
/// 0-2 m in 8 slices. A coarsening factor divides the ground resolution;
/// it must divide both cell counts evenly.
GridSpec wildtrack_grid(int factor = 1);

/// 16 m x 25 m ground plane at 2.5 cm cells (640 x 1000), same vertical
/// defaults as wildtrack_grid.
GridSpec multiviewx_grid(int factor = 1);

/// World position of the voxel's center. Throws IndexOutOfGrid.
Eigen::Vector3d voxel_center(const GridSpec& grid, const VoxelIndex& idx);

/// Cell containing the point, or nullopt when outside the grid.
std::optional<VoxelIndex> world_to_cell(const GridSpec& grid,
                                        const Eigen::Vector3d& point);

}  // namespace mvhull
