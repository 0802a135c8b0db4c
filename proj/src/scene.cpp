#include "mvhull/scene.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <random>

#include "mvhull/io.hpp"

namespace mvhull {

namespace {

// 53-bit uniform in [0, 1); independent of library distribution internals
// so that seeds reproduce across standard libraries.
double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

Eigen::Vector3d capsule_a(const Pedestrian& p) {
  return {p.foot.x(), p.foot.y(), p.radius};
}

Eigen::Vector3d capsule_b(const Pedestrian& p) {
  return {p.foot.x(), p.foot.y(), p.height - p.radius};
}

double point_segment_distance(const Eigen::Vector3d& p,
                              const Eigen::Vector3d& a,
                              const Eigen::Vector3d& b) {
  const Eigen::Vector3d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

void validate_pedestrian(const Pedestrian& p) {
  if (!(p.radius > 0.0))
    throw ConfigError("pedestrian radius must be positive");
  if (!(p.height > p.radius))
    throw ConfigError("pedestrian height must exceed its radius");
}

}  // namespace

double ray_segment_distance(const Eigen::Vector3d& origin,
                            const Eigen::Vector3d& dir,
                            const Eigen::Vector3d& seg_a,
                            const Eigen::Vector3d& seg_b) {
  const Eigen::Vector3d u = dir;
  const Eigen::Vector3d v = seg_b - seg_a;
  const Eigen::Vector3d w0 = origin - seg_a;
  const double A = u.dot(u);
  const double B = u.dot(v);
  const double C = v.dot(v);
  const double D = u.dot(w0);
  const double E = v.dot(w0);
  const double denom = A * C - B * B;

  double s, t;
  if (C == 0.0) {
    // Degenerate segment.
    s = std::max(0.0, -D / A);
    return (w0 + s * u).norm();
  }
  if (denom > 1e-14 * A * C) {
    s = (B * E - C * D) / denom;
    t = (A * E - B * D) / denom;
  } else {
    // Near-parallel: pin the ray parameter first.
    s = 0.0;
    t = E / C;
  }
  t = std::clamp(t, 0.0, 1.0);
  s = (t * B - D) / A;
  if (s < 0.0) s = 0.0;
  t = std::clamp((s * B + E) / C, 0.0, 1.0);
  return (w0 + s * u - t * v).norm();
}

std::vector<CameraModel> ring_cameras(int n, const Eigen::Vector2d& center,
                                      double ring_radius, double cam_height,
                                      const RingIntrinsics& intr) {
  if (n < 1) throw ConfigError("ring camera count must be >= 1");
  if (!(ring_radius > 0.0)) throw ConfigError("ring radius must be positive");

  const double cx = intr.cx >= 0.0 ? intr.cx : (intr.width - 1) / 2.0;
  const double cy = intr.cy >= 0.0 ? intr.cy : (intr.height - 1) / 2.0;
  const Eigen::Vector3d target(center.x(), center.y(), intr.look_at_z);

  std::vector<CameraModel> cams;
  cams.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double angle = 2.0 * M_PI * k / n;
    const Eigen::Vector3d pos(center.x() + ring_radius * std::cos(angle),
                              center.y() + ring_radius * std::sin(angle),
                              cam_height);
    const Eigen::Vector3d forward = (target - pos).normalized();
    Eigen::Vector3d right = forward.cross(Eigen::Vector3d::UnitZ());
    if (right.norm() < 1e-12)
      throw ConfigError("ring camera looks along world-up");
    right.normalize();
    const Eigen::Vector3d down = forward.cross(right).normalized();

    CameraModel cam;
    cam.fx = intr.fx;
    cam.fy = intr.fy;
    cam.cx = cx;
    cam.cy = cy;
    cam.image_w = intr.width;
    cam.image_h = intr.height;
    cam.R.row(0) = right.transpose();
    cam.R.row(1) = down.transpose();
    cam.R.row(2) = forward.transpose();
    cam.t = -cam.R * pos;
    cam.name = "cam" + std::to_string(k);
    cams.push_back(std::move(cam));
  }
  return cams;
}

Scene make_scene(const nlohmann::json& config, const GridSpec& grid,
                 std::uint64_t seed) {
  Scene scene;
  scene.rng_seed = seed;

  const double x_lo = grid.origin.x();
  const double x_hi = grid.origin.x() + grid.extent_x();
  const double y_lo = grid.origin.y();
  const double y_hi = grid.origin.y() + grid.extent_y();

  const nlohmann::json peds = config.value("pedestrians", nlohmann::json::array());
  if (peds.is_array()) {
    for (const auto& jp : peds) {
      Pedestrian p;
      p.foot = {jp.at("x").get<double>(), jp.at("y").get<double>()};
      p.radius = jp.value("radius", 0.25);
      p.height = jp.value("height", 1.7);
      validate_pedestrian(p);
      if (p.foot.x() < x_lo || p.foot.x() >= x_hi || p.foot.y() < y_lo ||
          p.foot.y() >= y_hi)
        throw ConfigError("pedestrian foot outside grid ground extent");
      scene.pedestrians.push_back(p);
    }
  } else if (peds.is_object()) {
    const int count = peds.at("random_count").get<int>();
    if (count < 0) throw ConfigError("random_count must be >= 0");
    const double min_dist = peds.value("min_dist", 0.5);
    const double margin = peds.value("margin", 0.0);
    const double radius = peds.value("radius", 0.25);
    const double height = peds.value("height", 1.7);
    const double sx_lo = x_lo + margin, sx_hi = x_hi - margin;
    const double sy_lo = y_lo + margin, sy_hi = y_hi - margin;
    if (!(sx_hi > sx_lo) || !(sy_hi > sy_lo))
      throw ConfigError("placement margin leaves no ground area");

    std::mt19937_64 rng(seed);
    for (int i = 0; i < count; ++i) {
      int rejects = 0;
      for (;;) {
        const Eigen::Vector2d foot(
            sx_lo + uniform01(rng) * (sx_hi - sx_lo),
            sy_lo + uniform01(rng) * (sy_hi - sy_lo));
        const bool clear = std::all_of(
            scene.pedestrians.begin(), scene.pedestrians.end(),
            [&](const Pedestrian& q) {
              return (q.foot - foot).norm() >= min_dist;
            });
        if (clear) {
          Pedestrian p;
          p.foot = foot;
          p.radius = radius;
          p.height = height;
          validate_pedestrian(p);
          scene.pedestrians.push_back(p);
          break;
        }
        if (++rejects >= 10000)
          throw PlacementFailure("could not place pedestrian " +
                                 std::to_string(i) + " after 10000 rejections");
      }
    }
  } else {
    throw ConfigError("scene pedestrians must be an array or an object");
  }

  const nlohmann::json cams = config.value("cameras", nlohmann::json());
  if (cams.is_array()) {
    for (const auto& jc : cams) scene.cameras.push_back(camera_from_json(jc));
  } else if (cams.is_object() && cams.contains("ring")) {
    const nlohmann::json& ring = cams.at("ring");
    RingIntrinsics intr;
    intr.fx = ring.value("fx", intr.fx);
    intr.fy = ring.value("fy", intr.fy);
    intr.cx = ring.value("cx", intr.cx);
    intr.cy = ring.value("cy", intr.cy);
    intr.width = ring.value("width", intr.width);
    intr.height = ring.value("height", intr.height);
    intr.look_at_z = ring.value("look_at_z", intr.look_at_z);
    const auto center_xy =
        ring.value("center", std::vector<double>{0.0, 0.0});
    if (center_xy.size() != 2)
      throw ConfigError("ring center needs exactly two values");
    const Eigen::Vector2d center(center_xy[0], center_xy[1]);
    scene.cameras = ring_cameras(ring.value("count", 4), center,
                                 ring.value("radius", 10.0),
                                 ring.value("cam_height", 3.0), intr);
  } else {
    throw ConfigError("scene cameras must be a calibration array or {\"ring\": ...}");
  }
  if (scene.cameras.empty()) throw ConfigError("scene needs at least one camera");
  for (const auto& c : scene.cameras) validate_camera(c);
  return scene;
}

bool point_in_pedestrian(const Scene& scene, const Eigen::Vector3d& p) {
  for (const auto& ped : scene.pedestrians)
    if (point_segment_distance(p, capsule_a(ped), capsule_b(ped)) <= ped.radius)
      return true;
  return false;
}

namespace {

struct PixelRect {
  int x0, y0, x1, y1;  // inclusive
  bool empty() const { return x0 > x1 || y0 > y1; }
};

// Conservative image-space bounds of a capsule: project the corners of its
// camera-frame AABB (a convex solid in front of the camera projects inside
// the hull of its projected vertices). Falls back to the whole image when
// the box reaches behind the camera.
PixelRect capsule_pixel_bounds(const CameraModel& cam, const Pedestrian& ped,
                               int width, int height) {
  const PixelRect full{0, 0, width - 1, height - 1};
  const Eigen::Vector3d ac = cam.R * capsule_a(ped) + cam.t;
  const Eigen::Vector3d bc = cam.R * capsule_b(ped) + cam.t;
  const Eigen::Vector3d lo = ac.cwiseMin(bc).array() - ped.radius;
  const Eigen::Vector3d hi = ac.cwiseMax(bc).array() + ped.radius;
  if (lo.z() <= 1e-9) return full;

  double u_min = 1e300, u_max = -1e300, v_min = 1e300, v_max = -1e300;
  for (int i = 0; i < 8; ++i) {
    const double x = (i & 1) ? hi.x() : lo.x();
    const double y = (i & 2) ? hi.y() : lo.y();
    const double z = (i & 4) ? hi.z() : lo.z();
    const double u = cam.fx * x / z + cam.cx;
    const double v = cam.fy * y / z + cam.cy;
    u_min = std::min(u_min, u);
    u_max = std::max(u_max, u);
    v_min = std::min(v_min, v);
    v_max = std::max(v_max, v);
  }
  // One extra pixel absorbs the supersampling offsets.
  PixelRect r{int(std::floor(u_min)) - 1, int(std::floor(v_min)) - 1,
              int(std::ceil(u_max)) + 1, int(std::ceil(v_max)) + 1};
  r.x0 = std::max(r.x0, 0);
  r.y0 = std::max(r.y0, 0);
  r.x1 = std::min(r.x1, width - 1);
  r.y1 = std::min(r.y1, height - 1);
  return r;
}

}  // namespace

Silhouette render_silhouette(const Scene& scene, int cam_index, int width,
                             int height, int supersample) {
  if (cam_index < 0 || cam_index >= int(scene.cameras.size()))
    throw InvalidCamera("camera index " + std::to_string(cam_index) +
                        " out of range");
  if (supersample < 1) throw ConfigError("supersample must be >= 1");
  if (width < 1 || height < 1) throw ConfigError("silhouette dims must be >= 1");

  const CameraModel& cam = scene.cameras[cam_index];
  const Eigen::Vector3d origin = camera_center(cam);
  const Eigen::Matrix3d Rt = cam.R.transpose();

  Silhouette sil{PlanarMap(1, height, width), cam.name};
  if (scene.pedestrians.empty()) return sil;

  std::vector<PixelRect> bounds;
  std::vector<Eigen::Vector3d> seg_a, seg_b;
  bounds.reserve(scene.pedestrians.size());
  for (const auto& ped : scene.pedestrians) {
    bounds.push_back(capsule_pixel_bounds(cam, ped, width, height));
    seg_a.push_back(capsule_a(ped));
    seg_b.push_back(capsule_b(ped));
  }

  std::vector<double> offsets(supersample);
  for (int k = 0; k < supersample; ++k)
    offsets[k] = (k + 0.5) / supersample - 0.5;

  const double inv_rays = 1.0 / (supersample * supersample);
  for (int py = 0; py < height; ++py) {
    for (int px = 0; px < width; ++px) {
      // Capsules whose conservative bounds miss this pixel cannot be hit.
      bool any = false;
      for (std::size_t i = 0; i < bounds.size(); ++i) {
        const PixelRect& b = bounds[i];
        if (!b.empty() && px >= b.x0 && px <= b.x1 && py >= b.y0 && py <= b.y1) {
          any = true;
          break;
        }
      }
      if (!any) continue;

      int hits = 0;
      for (int sy = 0; sy < supersample; ++sy) {
        for (int sx = 0; sx < supersample; ++sx) {
          const double u = px + offsets[sx];
          const double v = py + offsets[sy];
          const Eigen::Vector3d dir =
              (Rt * Eigen::Vector3d((u - cam.cx) / cam.fx,
                                    (v - cam.cy) / cam.fy, 1.0))
                  .normalized();
          for (std::size_t i = 0; i < scene.pedestrians.size(); ++i) {
            const PixelRect& b = bounds[i];
            if (b.empty() || px < b.x0 || px > b.x1 || py < b.y0 || py > b.y1)
              continue;
            if (ray_segment_distance(origin, dir, seg_a[i], seg_b[i]) <=
                scene.pedestrians[i].radius) {
              ++hits;
              break;
            }
          }
        }
      }
      sil.map.at(0, py, px) = float(hits * inv_rays);
    }
  }
  return sil;
}

std::vector<Eigen::Vector2d> ground_truth(const Scene& scene) {
  std::vector<Eigen::Vector2d> feet;
  feet.reserve(scene.pedestrians.size());
  for (const auto& p : scene.pedestrians) feet.push_back(p.foot);
  return feet;
}

}  // namespace mvhull
