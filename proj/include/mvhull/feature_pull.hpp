#pragma once

#include <utility>
#include <vector>

#include "mvhull/camera.hpp"
#include "mvhull/grid.hpp"
#include "mvhull/image.hpp"
#include "mvhull/volume.hpp"

namespace mvhull {

/// Evaluates the validity mask over the whole grid: one entry per voxel,
/// true where is_valid(cam, voxel_center, bounds) holds.
ValidityVolume compute_validity(const CameraModel& cam, const GridSpec& grid,
                                double bounds_w, double bounds_h);

template <typename Scalar>
struct PulledViewT {
  VoxelTensor<Scalar> features;
  ValidityVolume validity;
};

using PulledView = PulledViewT<float>;

/// Lifts a 2D map into the voxel grid: every valid voxel samples all C
/// channels bilinearly at its center's projection; invalid voxels are
/// exactly zero. The camera must already be expressed in the map's
/// coordinate frame (see adjust_intrinsics for downsampled maps).
template <typename Scalar>
PulledViewT<Scalar> pull_view(const PlanarMapT<Scalar>& map,
                              const CameraModel& cam, const GridSpec& grid) {
  PulledViewT<Scalar> out{VoxelTensor<Scalar>(map.channels(), grid),
                          ValidityVolume(grid)};
  const double bw = map.width();
  const double bh = map.height();
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int iz = 0; iz < grid.nz; ++iz) {
      for (int ix = 0; ix < grid.nx; ++ix) {
        const Eigen::Vector3d center = voxel_center(grid, {iy, iz, ix});
        PixelProjection p;
        if (!try_project(cam, center, p)) continue;
        if (p.depth <= 0.0 || p.u < 0.0 || p.u > bw || p.v < 0.0 || p.v > bh)
          continue;
        out.validity.set(iy, iz, ix, true);
        for (int c = 0; c < map.channels(); ++c)
          out.features.at(c, iy, iz, ix) =
              Scalar(bilinear_sample(map, p.u, p.v, c));
      }
    }
  }
  return out;
}

/// Averages per-view volumes over the views whose validity mask is true at
/// each voxel; voxels valid in zero views stay zero. Accumulates in double.
template <typename Scalar>
VoxelTensor<Scalar> aggregate_valid_mean(
    const std::vector<VoxelTensor<Scalar>>& volumes,
    const std::vector<ValidityVolume>& validity) {
  if (volumes.empty() || volumes.size() != validity.size())
    throw DimensionMismatch("aggregate needs equally many volumes and masks");
  for (std::size_t i = 1; i < volumes.size(); ++i)
    if (!volumes[i].same_shape(volumes[0]))
      throw DimensionMismatch("aggregate volumes disagree on shape");
  for (std::size_t i = 0; i < validity.size(); ++i)
    if (!validity[i].same_voxels(volumes[0]))
      throw DimensionMismatch("validity mask disagrees with volume shape");

  const auto& ref = volumes[0];
  VoxelTensor<Scalar> out(ref.channels(), ref.ny(), ref.nz(), ref.nx());
  for (int iy = 0; iy < ref.ny(); ++iy) {
    for (int iz = 0; iz < ref.nz(); ++iz) {
      for (int ix = 0; ix < ref.nx(); ++ix) {
        int n = 0;
        for (std::size_t i = 0; i < volumes.size(); ++i)
          n += validity[i].at(iy, iz, ix) ? 1 : 0;
        if (n == 0) continue;
        for (int c = 0; c < ref.channels(); ++c) {
          double sum = 0.0;
          for (std::size_t i = 0; i < volumes.size(); ++i)
            if (validity[i].at(iy, iz, ix)) sum += volumes[i].at(c, iy, iz, ix);
          out.at(c, iy, iz, ix) = Scalar(sum / n);
        }
      }
    }
  }
  return out;
}

}  // namespace mvhull
