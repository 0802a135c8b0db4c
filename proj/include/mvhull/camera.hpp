#pragma once

#include <Eigen/Dense>
#include <string>

#include "mvhull/errors.hpp"

namespace mvhull {

/// Calibrated pinhole camera with zero skew. World points map to image
/// coordinates through P = K [R | t]; pixel centers sit at integer
/// coordinates, so a W x H image spans roughly [0, W-1] x [0, H-1] with
/// the validity interval extending to the closed bounds [0, W] x [0, H].
struct CameraModel {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();
  int image_w = 1;
  int image_h = 1;
  std::string name;
};

/// Continuous image coordinates plus the homogeneous scale (camera-frame
/// depth in meters) before division.
struct PixelProjection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

/// Depths below this are treated as degenerate (point on the principal plane).
inline constexpr double kDepthEpsilon = 1e-12;

/// Throws ConfigError unless R is orthonormal (1e-9 per entry), focal
/// lengths are positive, and image dimensions are at least 1.
void validate_camera(const CameraModel& cam);

/// 3x4 projection matrix P = K [R | t].
Eigen::Matrix<double, 3, 4> projection_matrix(const CameraModel& cam);

/// Projects a world point; throws DegenerateProjection when |depth| < 1e-12.
PixelProjection project_point(const CameraModel& cam,
                              const Eigen::Vector3d& world_point);

/// Non-throwing projection; returns false for degenerate depth.
bool try_project(const CameraModel& cam, const Eigen::Vector3d& world_point,
                 PixelProjection& out);

/// True iff the point projects in front of the camera with u in [0, bounds_w]
/// and v in [0, bounds_h] (closed intervals). Degenerate depth folds to false.
bool is_valid(const CameraModel& cam, const Eigen::Vector3d& world_point,
              double bounds_w, double bounds_h);

/// Camera for an image rescaled by `scale` and shifted by (shift_u, shift_v):
/// fx' = fx*s, fy' = fy*s, cx' = cx*s + shift_u, cy' = cy*s + shift_v.
/// Extrinsics and sensor dimensions are unchanged. Throws InvalidScale for
/// scale <= 0.
CameraModel adjust_intrinsics(const CameraModel& cam, double scale,
                              double shift_u = 0.0, double shift_v = 0.0);

/// Camera with the translation vector displaced by `noise`.
CameraModel perturb_extrinsics(const CameraModel& cam,
                               const Eigen::Vector3d& noise);

/// Camera center in world coordinates, -R^T t.
Eigen::Vector3d camera_center(const CameraModel& cam);

}  // namespace mvhull
