#include "mvhull/camera.hpp"

#include <cmath>

namespace mvhull {

void validate_camera(const CameraModel& cam) {
  if (!(cam.fx > 0.0) || !(cam.fy > 0.0))
    throw ConfigError("camera '" + cam.name + "': focal lengths must be positive");
  if (cam.image_w < 1 || cam.image_h < 1)
    throw ConfigError("camera '" + cam.name + "': image dimensions must be >= 1");
  const Eigen::Matrix3d dev = cam.R * cam.R.transpose() - Eigen::Matrix3d::Identity();
  if (dev.cwiseAbs().maxCoeff() >= 1e-9)
    throw ConfigError("camera '" + cam.name + "': rotation is not orthonormal");
}

Eigen::Matrix<double, 3, 4> projection_matrix(const CameraModel& cam) {
  Eigen::Matrix3d K;
  K << cam.fx, 0.0, cam.cx,
       0.0, cam.fy, cam.cy,
       0.0, 0.0, 1.0;
  Eigen::Matrix<double, 3, 4> Rt;
  Rt.leftCols<3>() = cam.R;
  Rt.col(3) = cam.t;
  return K * Rt;
}

bool try_project(const CameraModel& cam, const Eigen::Vector3d& world_point,
                 PixelProjection& out) {
  const Eigen::Vector3d pc = cam.R * world_point + cam.t;
  if (std::abs(pc.z()) < kDepthEpsilon) return false;
  out.u = cam.fx * pc.x() / pc.z() + cam.cx;
  out.v = cam.fy * pc.y() / pc.z() + cam.cy;
  out.depth = pc.z();
  return true;
}

PixelProjection project_point(const CameraModel& cam,
                              const Eigen::Vector3d& world_point) {
  PixelProjection p;
  if (!try_project(cam, world_point, p))
    throw DegenerateProjection("point projects onto the principal plane");
  return p;
}

bool is_valid(const CameraModel& cam, const Eigen::Vector3d& world_point,
              double bounds_w, double bounds_h) {
  PixelProjection p;
  if (!try_project(cam, world_point, p)) return false;
  if (p.depth <= 0.0) return false;
  return p.u >= 0.0 && p.u <= bounds_w && p.v >= 0.0 && p.v <= bounds_h;
}

CameraModel adjust_intrinsics(const CameraModel& cam, double scale,
                              double shift_u, double shift_v) {
  if (!(scale > 0.0)) throw InvalidScale("intrinsics scale must be positive");
  CameraModel out = cam;
  out.fx = cam.fx * scale;
  out.fy = cam.fy * scale;
  out.cx = cam.cx * scale + shift_u;
  out.cy = cam.cy * scale + shift_v;
  return out;
}

CameraModel perturb_extrinsics(const CameraModel& cam,
                               const Eigen::Vector3d& noise) {
  CameraModel out = cam;
  out.t = cam.t + noise;
  return out;
}

Eigen::Vector3d camera_center(const CameraModel& cam) {
  return -cam.R.transpose() * cam.t;
}

}  // namespace mvhull
