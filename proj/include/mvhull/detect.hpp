#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mvhull/grid.hpp"
#include "mvhull/image.hpp"

namespace mvhull {

/// Ground-plane detection in world meters.
struct Detection {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double score = 0.0;
};

/// Extracts peaks from a 1-channel ny x nx heatmap. A cell is a peak iff its
/// value is >= threshold and no cell in the (2r+1)^2 window beats it (equal
/// values lose to the lower linear index, so a plateau yields one peak per
/// window). Positions are cell centers, displaced by the optional 2-channel
/// offset map (given in cells, converted to meters). Output is sorted by
/// descending score, ties by linear index.
std::vector<Detection> decode_detections(
    const BevMap& heatmap, const GridSpec& grid, double threshold,
    int nms_radius, const BevMap* offset_map = nullptr);

}  // namespace mvhull
