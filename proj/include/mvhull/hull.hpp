#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mvhull/image.hpp"
#include "mvhull/volume.hpp"

namespace mvhull {

/// Single-channel foreground mask in [0, 1] for one camera view.
struct Silhouette {
  PlanarMap map;
  std::string camera;
};

/// How a probabilistic hull is combined with a feature volume.
enum class FusionMode { kConcat, kMult, kMultAdd, kMultConcat };

/// Reduction applied along Z when flattening a volume to the ground plane.
enum class BevReduce { kMaxZ, kMeanZ, kSumZ };

FusionMode parse_fusion_mode(std::string_view name);
std::string_view fusion_mode_name(FusionMode mode);
BevReduce parse_bev_reduce(std::string_view name);
std::string_view bev_reduce_name(BevReduce mode);

/// Anti-aliased downsampling: Gaussian blur (default sigma = factor/2,
/// truncated at 3*sigma) followed by bilinear resize by 1/factor. Pass
/// sigma = 0 for a blur-free resize; factor 1 with sigma 0 is the identity.
Silhouette preprocess_silhouette(const Silhouette& mask, int factor,
                                 double sigma = -1.0);

/// Number of views whose validity mask covers each voxel.
CountVolume valid_view_count(const std::vector<ValidityVolume>& validity);

namespace detail {
void check_hull_inputs(std::size_t n_views, std::size_t n_masks);
}

/// Binary visual hull: a voxel is a member iff every view that observes it
/// sampled a silhouette value above tau, and at least min_views observe it.
template <typename Scalar>
OccupancyVolumeT<Scalar> visual_hull(
    const std::vector<OccupancyVolumeT<Scalar>>& occ_views,
    const std::vector<ValidityVolume>& validity, double tau = 0.0,
    int min_views = 1) {
  detail::check_hull_inputs(occ_views.size(), validity.size());
  const auto& ref = occ_views[0].values;
  for (const auto& v : occ_views)
    if (v.values.channels() != 1 || !v.values.same_voxels(ref))
      throw DimensionMismatch("hull views disagree on shape");
  for (const auto& m : validity)
    if (!m.same_voxels(ref))
      throw DimensionMismatch("validity mask disagrees with hull views");

  OccupancyVolumeT<Scalar> hull{
      VoxelTensor<Scalar>(1, ref.ny(), ref.nz(), ref.nx()),
      OccupancyKind::kBinary};
  for (int iy = 0; iy < ref.ny(); ++iy)
    for (int iz = 0; iz < ref.nz(); ++iz)
      for (int ix = 0; ix < ref.nx(); ++ix) {
        int observing = 0, hits = 0;
        for (std::size_t i = 0; i < occ_views.size(); ++i) {
          if (!validity[i].at(iy, iz, ix)) continue;
          ++observing;
          if (occ_views[i].values.at(0, iy, iz, ix) > tau) ++hits;
        }
        if (observing >= min_views && hits == observing)
          hull.values.at(0, iy, iz, ix) = Scalar(1);
      }
  return hull;
}

/// Probabilistic visual hull: the product of the sampled silhouette values
/// across the observing views wherever the binary hull is set, zero
/// elsewhere. Products accumulate in double.
template <typename Scalar>
OccupancyVolumeT<Scalar> probabilistic_visual_hull(
    const std::vector<OccupancyVolumeT<Scalar>>& occ_views,
    const std::vector<ValidityVolume>& validity,
    const OccupancyVolumeT<Scalar>& vh) {
  detail::check_hull_inputs(occ_views.size(), validity.size());
  const auto& ref = vh.values;
  if (ref.channels() != 1)
    throw DimensionMismatch("hull volume must have one channel");
  for (const auto& v : occ_views)
    if (v.values.channels() != 1 || !v.values.same_voxels(ref))
      throw DimensionMismatch("hull views disagree on shape");
  for (const auto& m : validity)
    if (!m.same_voxels(ref))
      throw DimensionMismatch("validity mask disagrees with hull views");

  OccupancyVolumeT<Scalar> pvh{
      VoxelTensor<Scalar>(1, ref.ny(), ref.nz(), ref.nx()),
      OccupancyKind::kProbabilistic};
  for (int iy = 0; iy < ref.ny(); ++iy)
    for (int iz = 0; iz < ref.nz(); ++iz)
      for (int ix = 0; ix < ref.nx(); ++ix) {
        if (ref.at(0, iy, iz, ix) == Scalar(0)) continue;
        double prod = 1.0;
        for (std::size_t i = 0; i < occ_views.size(); ++i)
          if (validity[i].at(iy, iz, ix))
            prod *= occ_views[i].values.at(0, iy, iz, ix);
        pvh.values.at(0, iy, iz, ix) = Scalar(prod);
      }
  return pvh;
}

/// Combines a feature volume with a 1-channel occupancy volume.
///   concat       -> C+1 channels, occupancy appended
///   mult         -> C channels, features * occupancy
///   mult_add     -> C channels, features * (1 + occupancy)
///   mult_concat  -> 2C channels, features then features * occupancy
template <typename Scalar>
VoxelTensor<Scalar> fuse(const VoxelTensor<Scalar>& features,
                         const OccupancyVolumeT<Scalar>& pvh,
                         FusionMode mode) {
  if (pvh.values.channels() != 1)
    throw DimensionMismatch("fuse expects a 1-channel occupancy volume");
  if (!features.same_voxels(pvh.values))
    throw DimensionMismatch("fuse inputs disagree on voxel dims");

  const int c_in = features.channels();
  auto for_each_voxel = [&](auto&& fn) {
    for (int iy = 0; iy < features.ny(); ++iy)
      for (int iz = 0; iz < features.nz(); ++iz)
        for (int ix = 0; ix < features.nx(); ++ix) fn(iy, iz, ix);
  };

  switch (mode) {
    case FusionMode::kConcat: {
      VoxelTensor<Scalar> out(c_in + 1, features.ny(), features.nz(),
                              features.nx());
      for_each_voxel([&](int iy, int iz, int ix) {
        for (int c = 0; c < c_in; ++c)
          out.at(c, iy, iz, ix) = features.at(c, iy, iz, ix);
        out.at(c_in, iy, iz, ix) = pvh.values.at(0, iy, iz, ix);
      });
      return out;
    }
    case FusionMode::kMult: {
      VoxelTensor<Scalar> out(c_in, features.ny(), features.nz(),
                              features.nx());
      for_each_voxel([&](int iy, int iz, int ix) {
        const Scalar p = pvh.values.at(0, iy, iz, ix);
        for (int c = 0; c < c_in; ++c)
          out.at(c, iy, iz, ix) = features.at(c, iy, iz, ix) * p;
      });
      return out;
    }
    case FusionMode::kMultAdd: {
      VoxelTensor<Scalar> out(c_in, features.ny(), features.nz(),
                              features.nx());
      for_each_voxel([&](int iy, int iz, int ix) {
        const Scalar p = pvh.values.at(0, iy, iz, ix);
        for (int c = 0; c < c_in; ++c) {
          const Scalar f = features.at(c, iy, iz, ix);
          out.at(c, iy, iz, ix) = f + f * p;
        }
      });
      return out;
    }
    case FusionMode::kMultConcat: {
      VoxelTensor<Scalar> out(2 * c_in, features.ny(), features.nz(),
                              features.nx());
      for_each_voxel([&](int iy, int iz, int ix) {
        const Scalar p = pvh.values.at(0, iy, iz, ix);
        for (int c = 0; c < c_in; ++c) {
          out.at(c, iy, iz, ix) = features.at(c, iy, iz, ix);
          out.at(c_in + c, iy, iz, ix) = features.at(c, iy, iz, ix) * p;
        }
      });
      return out;
    }
  }
  throw UnknownMode("unknown fusion mode");
}

/// Flattens the vertical axis with the chosen reduction, producing a
/// channels x ny x nx BEV map. Mean accumulates in double.
template <typename Scalar>
PlanarMapT<Scalar> compress_bev(const VoxelTensor<Scalar>& volume,
                                BevReduce mode) {
  PlanarMapT<Scalar> bev(volume.channels(), volume.ny(), volume.nx());
  for (int c = 0; c < volume.channels(); ++c)
    for (int iy = 0; iy < volume.ny(); ++iy)
      for (int ix = 0; ix < volume.nx(); ++ix) {
        switch (mode) {
          case BevReduce::kMaxZ: {
            Scalar m = volume.at(c, iy, 0, ix);
            for (int iz = 1; iz < volume.nz(); ++iz)
              m = std::max(m, volume.at(c, iy, iz, ix));
            bev.at(c, iy, ix) = m;
            break;
          }
          case BevReduce::kMeanZ: {
            double sum = 0.0;
            for (int iz = 0; iz < volume.nz(); ++iz)
              sum += volume.at(c, iy, iz, ix);
            bev.at(c, iy, ix) = Scalar(sum / volume.nz());
            break;
          }
          case BevReduce::kSumZ: {
            double sum = 0.0;
            for (int iz = 0; iz < volume.nz(); ++iz)
              sum += volume.at(c, iy, iz, ix);
            bev.at(c, iy, ix) = Scalar(sum);
            break;
          }
        }
      }
  return bev;
}

template <typename Scalar>
PlanarMapT<Scalar> compress_bev(const OccupancyVolumeT<Scalar>& volume,
                                BevReduce mode) {
  return compress_bev(volume.values, mode);
}

}  // namespace mvhull
