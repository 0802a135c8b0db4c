#pragma once

#include <cstdint>
#include <vector>

#include "mvhull/errors.hpp"
#include "mvhull/grid.hpp"

namespace mvhull {

/// Dense C x Y x Z x X voxel tensor (channel-major, X contiguous).
template <typename Scalar>
class VoxelTensor {
 public:
  VoxelTensor() = default;
  VoxelTensor(int channels, int ny, int nz, int nx, Scalar fill = Scalar(0))
      : channels_(channels), ny_(ny), nz_(nz), nx_(nx),
        data_(std::size_t(channels) * ny * nz * nx, fill) {
    if (channels < 1 || ny < 1 || nz < 1 || nx < 1)
      throw DimensionMismatch("voxel tensor dimensions must be >= 1");
  }
  VoxelTensor(int channels, const GridSpec& grid, Scalar fill = Scalar(0))
      : VoxelTensor(channels, grid.ny, grid.nz, grid.nx, fill) {}

  int channels() const { return channels_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  int nx() const { return nx_; }
  std::size_t size() const { return data_.size(); }
  std::size_t voxels() const { return std::size_t(ny_) * nz_ * nx_; }

  Scalar& at(int c, int iy, int iz, int ix) { return data_[offset(c, iy, iz, ix)]; }
  Scalar at(int c, int iy, int iz, int ix) const { return data_[offset(c, iy, iz, ix)]; }
  Scalar& at(int c, const VoxelIndex& i) { return at(c, i.iy, i.iz, i.ix); }
  Scalar at(int c, const VoxelIndex& i) const { return at(c, i.iy, i.iz, i.ix); }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }

  /// Linear index of a voxel within one channel.
  std::size_t voxel_offset(int iy, int iz, int ix) const {
    return (std::size_t(iy) * nz_ + iz) * nx_ + ix;
  }

  bool same_voxels(const VoxelTensor& o) const {
    return ny_ == o.ny_ && nz_ == o.nz_ && nx_ == o.nx_;
  }
  bool same_shape(const VoxelTensor& o) const {
    return channels_ == o.channels_ && same_voxels(o);
  }

 private:
  std::size_t offset(int c, int iy, int iz, int ix) const {
    return ((std::size_t(c) * ny_ + iy) * nz_ + iz) * nx_ + ix;
  }

  int channels_ = 0;
  int ny_ = 0;
  int nz_ = 0;
  int nx_ = 0;
  std::vector<Scalar> data_;
};

using FeatureVolume = VoxelTensor<float>;
using CountVolume = VoxelTensor<std::int32_t>;

/// Per-view boolean mask over the grid: true where the voxel center projects
/// inside the camera's frustum and image bounds. Deterministic function of
/// (camera, grid, bounds).
class ValidityVolume {
 public:
  ValidityVolume() = default;
  ValidityVolume(int ny, int nz, int nx, bool fill = false)
      : ny_(ny), nz_(nz), nx_(nx),
        mask_(std::size_t(ny) * nz * nx, fill ? 1 : 0) {
    if (ny < 1 || nz < 1 || nx < 1)
      throw DimensionMismatch("validity volume dimensions must be >= 1");
  }
  explicit ValidityVolume(const GridSpec& grid, bool fill = false)
      : ValidityVolume(grid.ny, grid.nz, grid.nx, fill) {}

  int ny() const { return ny_; }
  int nz() const { return nz_; }
  int nx() const { return nx_; }
  std::size_t voxels() const { return mask_.size(); }

  bool at(int iy, int iz, int ix) const { return mask_[offset(iy, iz, ix)] != 0; }
  bool at(const VoxelIndex& i) const { return at(i.iy, i.iz, i.ix); }
  void set(int iy, int iz, int ix, bool value) {
    mask_[offset(iy, iz, ix)] = value ? 1 : 0;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : mask_) n += b;
    return n;
  }

  bool same_voxels(const ValidityVolume& o) const {
    return ny_ == o.ny_ && nz_ == o.nz_ && nx_ == o.nx_;
  }
  template <typename Scalar>
  bool same_voxels(const VoxelTensor<Scalar>& o) const {
    return ny_ == o.ny() && nz_ == o.nz() && nx_ == o.nx();
  }

 private:
  std::size_t offset(int iy, int iz, int ix) const {
    return (std::size_t(iy) * nz_ + iz) * nx_ + ix;
  }

  int ny_ = 0;
  int nz_ = 0;
  int nx_ = 0;
  std::vector<std::uint8_t> mask_;
};

enum class OccupancyKind { kBinary, kProbabilistic };

/// 1-channel voxel volume of occupancy evidence. Binary volumes hold only
/// {0, 1}; probabilistic volumes hold values in [0, 1].
template <typename Scalar>
struct OccupancyVolumeT {
  VoxelTensor<Scalar> values;
  OccupancyKind kind = OccupancyKind::kProbabilistic;
};

using OccupancyVolume = OccupancyVolumeT<float>;

/// Wraps a pulled 1-channel volume as occupancy evidence.
template <typename Scalar>
OccupancyVolumeT<Scalar> as_occupancy(
    VoxelTensor<Scalar> values,
    OccupancyKind kind = OccupancyKind::kProbabilistic) {
  if (values.channels() != 1)
    throw DimensionMismatch("occupancy volumes must have exactly one channel");
  return {std::move(values), kind};
}

}  // namespace mvhull
