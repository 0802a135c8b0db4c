#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "mvhull/camera.hpp"
#include "mvhull/grid.hpp"
#include "mvhull/hull.hpp"

namespace mvhull {

/// Capsule-shaped pedestrian: a vertical segment from foot + (0,0,radius)
/// to foot + (0,0,height-radius), inflated by radius.
struct Pedestrian {
  Eigen::Vector2d foot = Eigen::Vector2d::Zero();
  double radius = 0.25;
  double height = 1.7;
};

struct Scene {
  std::vector<Pedestrian> pedestrians;
  std::vector<CameraModel> cameras;
  std::uint64_t rng_seed = 0;
};

/// Shared intrinsics for a ring of cameras. Negative cx/cy default to the
/// pixel-grid center ((w-1)/2, (h-1)/2).
struct RingIntrinsics {
  double fx = 500.0;
  double fy = 500.0;
  double cx = -1.0;
  double cy = -1.0;
  int width = 640;
  int height = 360;
  double look_at_z = 1.0;
};

/// n cameras evenly spaced on a circle of ring_radius around center at
/// cam_height, each looking at (center, look_at_z) with world-up (0,0,1).
std::vector<CameraModel> ring_cameras(int n, const Eigen::Vector2d& center,
                                      double ring_radius, double cam_height,
                                      const RingIntrinsics& intrinsics);

/// Builds a scene from its JSON description. Pedestrians are either listed
/// explicitly or drawn uniformly inside the grid's ground extent with
/// rejection sampling to keep pairwise foot distances >= min_dist;
/// deterministic for a fixed seed. Throws PlacementFailure after 10000
/// consecutive rejections.
Scene make_scene(const nlohmann::json& config, const GridSpec& grid,
                 std::uint64_t seed);

/// True iff the point lies inside any pedestrian's capsule.
bool point_in_pedestrian(const Scene& scene, const Eigen::Vector3d& p);

/// Renders the scene's silhouette from one camera by casting supersample^2
/// rays per pixel through the pixel footprint (centers at integer
/// coordinates) and recording the covered fraction. supersample = 1 yields
/// exact binary masks.
Silhouette render_silhouette(const Scene& scene, int cam_index, int width,
                             int height, int supersample = 1);

/// Ground-truth foot positions, in pedestrian order.
std::vector<Eigen::Vector2d> ground_truth(const Scene& scene);

/// Minimum distance from a ray (origin, direction, s >= 0) to a segment.
/// Exposed for the rendering tests.
double ray_segment_distance(const Eigen::Vector3d& origin,
                            const Eigen::Vector3d& dir,
                            const Eigen::Vector3d& seg_a,
                            const Eigen::Vector3d& seg_b);

}  // namespace mvhull
