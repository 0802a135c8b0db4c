#include "mvhull/hull.hpp"

namespace mvhull {

FusionMode parse_fusion_mode(std::string_view name) {
  if (name == "concat") return FusionMode::kConcat;
  if (name == "mult") return FusionMode::kMult;
  if (name == "mult_add") return FusionMode::kMultAdd;
  if (name == "mult_concat") return FusionMode::kMultConcat;
  throw UnknownMode("unknown fusion mode: " + std::string(name));
}

std::string_view fusion_mode_name(FusionMode mode) {
  switch (mode) {
    case FusionMode::kConcat: return "concat";
    case FusionMode::kMult: return "mult";
    case FusionMode::kMultAdd: return "mult_add";
    case FusionMode::kMultConcat: return "mult_concat";
  }
  return "?";
}

BevReduce parse_bev_reduce(std::string_view name) {
  if (name == "max_z") return BevReduce::kMaxZ;
  if (name == "mean_z") return BevReduce::kMeanZ;
  if (name == "sum_z") return BevReduce::kSumZ;
  throw UnknownMode("unknown bev reduction: " + std::string(name));
}

std::string_view bev_reduce_name(BevReduce mode) {
  switch (mode) {
    case BevReduce::kMaxZ: return "max_z";
    case BevReduce::kMeanZ: return "mean_z";
    case BevReduce::kSumZ: return "sum_z";
  }
  return "?";
}

Silhouette preprocess_silhouette(const Silhouette& mask, int factor,
                                 double sigma) {
  if (factor < 1) throw InvalidFactor("silhouette factor must be >= 1");
  if (mask.map.channels() != 1)
    throw DimensionMismatch("silhouettes are single-channel");
  if (sigma < 0.0) sigma = factor / 2.0;
  PlanarMap blurred = gaussian_blur(mask.map, sigma);
  // Blur of values in [0,1] stays in [0,1]; clamp residual rounding.
  for (std::size_t i = 0; i < blurred.size(); ++i)
    blurred.data()[i] = std::clamp(blurred.data()[i], 0.0f, 1.0f);
  return {resize_by_factor(blurred, factor), mask.camera};
}

CountVolume valid_view_count(const std::vector<ValidityVolume>& validity) {
  if (validity.empty())
    throw DimensionMismatch("valid_view_count needs at least one mask");
  for (const auto& m : validity)
    if (!m.same_voxels(validity[0]))
      throw DimensionMismatch("validity masks disagree on shape");
  CountVolume counts(1, validity[0].ny(), validity[0].nz(), validity[0].nx());
  for (int iy = 0; iy < counts.ny(); ++iy)
    for (int iz = 0; iz < counts.nz(); ++iz)
      for (int ix = 0; ix < counts.nx(); ++ix) {
        int n = 0;
        for (const auto& m : validity) n += m.at(iy, iz, ix) ? 1 : 0;
        counts.at(0, iy, iz, ix) = n;
      }
  return counts;
}

namespace detail {

void check_hull_inputs(std::size_t n_views, std::size_t n_masks) {
  if (n_views == 0 || n_views != n_masks)
    throw DimensionMismatch("hull needs equally many views and masks");
}

}  // namespace detail

}  // namespace mvhull
