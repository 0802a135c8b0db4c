#include "mvhull/feature_pull.hpp"

namespace mvhull {

ValidityVolume compute_validity(const CameraModel& cam, const GridSpec& grid,
                                double bounds_w, double bounds_h) {
  ValidityVolume out(grid);
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int iz = 0; iz < grid.nz; ++iz)
      for (int ix = 0; ix < grid.nx; ++ix) {
        const Eigen::Vector3d center =
            voxel_center(grid, VoxelIndex{iy, iz, ix});
        out.set(iy, iz, ix, is_valid(cam, center, bounds_w, bounds_h));
      }
  return out;
}

}  // namespace mvhull
