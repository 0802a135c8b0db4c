#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "mvhull/scene.hpp"
#include "test_support.hpp"

using namespace mvhull;
using test_support::uniform;
using test_support::uniform_int;

namespace {

GridSpec test_grid() {
  GridSpec g;
  g.origin = {-5.0, -5.0, 0.0};
  g.cell_xy = 0.1;
  g.cell_z = 0.25;
  g.nx = g.ny = 100;
  g.nz = 8;
  return g;
}

nlohmann::json ring_config(int count, double radius = 18.0,
                           double cam_height = 4.0) {
  return {{"ring",
           {{"count", count}, {"center", {0.0, 0.0}}, {"radius", radius},
            {"cam_height", cam_height}, {"fx", 600.0}, {"fy", 600.0},
            {"width", 480}, {"height", 270}}}};
}

// Closed-form point-to-segment distance, written independently of the
// library's helper.
double seg_dist_oracle(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                       const Eigen::Vector3d& b) {
  const Eigen::Vector3d d = b - a;
  double t = d.squaredNorm() > 0 ? (p - a).dot(d) / d.squaredNorm() : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - a - t * d).norm();
}

}  // namespace

TEST_CASE("make_scene explicit, empty, and deterministic random scenes") {
  const GridSpec grid = test_grid();

  nlohmann::json cfg{{"pedestrians", nlohmann::json::array()},
                     {"cameras", ring_config(3)}};
  const Scene empty = make_scene(cfg, grid, 1);
  CHECK(empty.pedestrians.empty());
  CHECK(empty.cameras.size() == 3);
  CHECK(ground_truth(empty).empty());

  cfg["pedestrians"] = {{{"x", 3.0}, {"y", 4.0}}};
  const Scene one = make_scene(cfg, grid, 1);
  REQUIRE(one.pedestrians.size() == 1);
  CHECK(ground_truth(one)[0] == Eigen::Vector2d(3.0, 4.0));
  CHECK(one.pedestrians[0].radius == doctest::Approx(0.25));
  CHECK(one.pedestrians[0].height == doctest::Approx(1.7));

  cfg["pedestrians"] = {{{"x", 0.0}, {"y", 0.0}, {"radius", 0.3}, {"height", 1.9}}};
  const Scene custom = make_scene(cfg, grid, 1);
  CHECK(custom.pedestrians[0].radius == doctest::Approx(0.3));
  CHECK(custom.pedestrians[0].height == doctest::Approx(1.9));
  cfg["pedestrians"] = {{{"x", 0.0}, {"y", 0.0}, {"radius", 0.0}}};
  CHECK_THROWS_AS(make_scene(cfg, grid, 1), ConfigError);
  cfg["pedestrians"] = {{{"x", 0.0}, {"y", 0.0}, {"height", 0.2}}};
  CHECK_THROWS_AS(make_scene(cfg, grid, 1), ConfigError);

  cfg["pedestrians"] = {{"random_count", 20}, {"min_dist", 0.5}};
  const Scene a = make_scene(cfg, grid, 7);
  const Scene b = make_scene(cfg, grid, 7);
  const Scene c = make_scene(cfg, grid, 8);
  REQUIRE(a.pedestrians.size() == 20);
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(a.pedestrians[i].foot == b.pedestrians[i].foot);
  bool differs = false;
  for (std::size_t i = 0; i < 20; ++i)
    differs |= a.pedestrians[i].foot != c.pedestrians[i].foot;
  CHECK(differs);

  // Pairwise distances respect min_dist (O(n^2) oracle).
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = i + 1; j < 20; ++j)
      CHECK((a.pedestrians[i].foot - a.pedestrians[j].foot).norm() >= 0.5);

  // Feet inside the ground extent.
  for (const auto& p : a.pedestrians) {
    CHECK(p.foot.x() >= grid.origin.x());
    CHECK(p.foot.x() < grid.origin.x() + grid.extent_x());
    CHECK(p.foot.y() >= grid.origin.y());
    CHECK(p.foot.y() < grid.origin.y() + grid.extent_y());
  }
}

TEST_CASE("make_scene failure modes") {
  const GridSpec grid = test_grid();
  nlohmann::json cfg{{"pedestrians", {{{"x", 99.0}, {"y", 0.0}}}},
                     {"cameras", ring_config(2)}};
  CHECK_THROWS_AS(make_scene(cfg, grid, 1), ConfigError);

  // Overcrowded request: 100 pedestrians 3 m apart in a 10 m square.
  cfg["pedestrians"] = {{"random_count", 100}, {"min_dist", 3.0}};
  CHECK_THROWS_AS(make_scene(cfg, grid, 1), PlacementFailure);

  cfg["pedestrians"] = nlohmann::json::array();
  cfg.erase("cameras");
  CHECK_THROWS_AS(make_scene(cfg, grid, 1), ConfigError);
}

TEST_CASE("point_in_pedestrian axis and lateral cases") {
  Scene scene;
  scene.cameras.push_back(CameraModel{});
  Pedestrian ped;
  ped.foot = {1.0, 2.0};
  scene.pedestrians.push_back(ped);

  CHECK(point_in_pedestrian(scene, {1.0, 2.0, ped.height / 2}));
  CHECK(!point_in_pedestrian(scene, {1.0 + 2 * ped.radius, 2.0, ped.height / 2}));
  CHECK(!point_in_pedestrian(scene, {1.0, 2.0, ped.height + 0.01}));
  CHECK(point_in_pedestrian(scene, {1.0, 2.0, 0.01}));

  // Against the closed-form segment-distance oracle on random points.
  std::mt19937_64 rng(303);
  const Eigen::Vector3d a(1.0, 2.0, ped.radius);
  const Eigen::Vector3d b(1.0, 2.0, ped.height - ped.radius);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Vector3d p(uniform(rng, 0.0, 2.0), uniform(rng, 1.0, 3.0),
                            uniform(rng, -0.5, 2.5));
    CHECK(point_in_pedestrian(scene, p) == (seg_dist_oracle(p, a, b) <= ped.radius));
  }
}

TEST_CASE("ring_cameras geometry") {
  RingIntrinsics intr;
  intr.fx = intr.fy = 700.0;
  intr.width = 480;
  intr.height = 270;
  intr.look_at_z = 1.0;

  const auto one = ring_cameras(1, {2.0, -1.0}, 15.0, 4.0, intr);
  REQUIRE(one.size() == 1);
  validate_camera(one[0]);
  // The look-at point lands at the principal point.
  const auto p = project_point(one[0], {2.0, -1.0, 1.0});
  CHECK(std::abs(p.u - (480 - 1) / 2.0) < 1e-9);
  CHECK(std::abs(p.v - (270 - 1) / 2.0) < 1e-9);
  CHECK(p.depth > 0.0);

  const auto four = ring_cameras(4, {0.0, 0.0}, 10.0, 3.0, intr);
  REQUIRE(four.size() == 4);
  for (const auto& cam : four) validate_camera(cam);
  for (int k = 0; k < 4; ++k) {
    const Eigen::Vector3d pos = camera_center(four[k]);
    const Eigen::Vector3d next = camera_center(four[(k + 1) % 4]);
    // Consecutive positions are 90 degrees apart on the ring.
    const Eigen::Vector2d a(pos.x(), pos.y()), b(next.x(), next.y());
    CHECK(a.dot(b) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(a.norm() == doctest::Approx(10.0));
    CHECK(pos.z() == doctest::Approx(3.0));
  }
}

TEST_CASE("ring_cameras rejects degenerate look directions") {
  RingIntrinsics intr;
  CHECK_THROWS_AS(ring_cameras(0, {0, 0}, 10.0, 3.0, intr), ConfigError);
  CHECK_THROWS_AS(ring_cameras(4, {0, 0}, 0.0, 3.0, intr), ConfigError);
  // A camera essentially straight above the look-at point has no usable
  // world-up reference.
  CHECK_THROWS_AS(ring_cameras(1, {0, 0}, 1e-13, 10.0, intr), ConfigError);
}

TEST_CASE("render_silhouette empty scene and single capsule") {
  const GridSpec grid = test_grid();
  nlohmann::json cfg{{"pedestrians", nlohmann::json::array()},
                     {"cameras", ring_config(4)}};
  Scene scene = make_scene(cfg, grid, 1);
  const Silhouette blank = render_silhouette(scene, 0, 480, 270, 1);
  for (int y = 0; y < 270; ++y)
    for (int x = 0; x < 480; ++x) CHECK(blank.map.at(0, y, x) == 0.0f);

  cfg["pedestrians"] = {{{"x", 0.0}, {"y", 0.0}}};
  scene = make_scene(cfg, grid, 1);
  const Silhouette sil = render_silhouette(scene, 0, 480, 270, 1);

  // The capsule axis midpoint projects inside the blob.
  const auto mid = project_point(scene.cameras[0], {0.0, 0.0, 0.85});
  const int px = int(std::lround(mid.u));
  const int py = int(std::lround(mid.v));
  CHECK(sil.map.at(0, py, px) == 1.0f);

  // Nonzero pixels form a vertically elongated blob around the projection.
  int min_x = 1 << 30, max_x = -1, min_y = 1 << 30, max_y = -1;
  std::size_t covered = 0;
  for (int y = 0; y < 270; ++y)
    for (int x = 0; x < 480; ++x)
      if (sil.map.at(0, y, x) > 0.0f) {
        ++covered;
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
  CHECK(covered > 0);
  CHECK(max_y - min_y > max_x - min_x);  // taller than wide
  CHECK(px >= min_x);
  CHECK(px <= max_x);

  CHECK_THROWS_AS(render_silhouette(scene, 99, 480, 270, 1), InvalidCamera);
}

TEST_CASE("render_silhouette agrees with a ray-march oracle") {
  const GridSpec grid = test_grid();
  nlohmann::json cfg{{"pedestrians",
                      {{"random_count", 6}, {"min_dist", 0.8}, {"margin", 1.0}}},
                     {"cameras", ring_config(3)}};
  const Scene scene = make_scene(cfg, grid, 11);
  const CameraModel& cam = scene.cameras[0];
  const Eigen::Vector3d origin = camera_center(cam);
  const Silhouette sil = render_silhouette(scene, 0, 480, 270, 1);

  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const int px = uniform_int(rng, 0, 479);
    const int py = uniform_int(rng, 0, 269);
    const Eigen::Vector3d dir =
        (cam.R.transpose() * Eigen::Vector3d((px - cam.cx) / cam.fx,
                                             (py - cam.cy) / cam.fy, 1.0))
            .normalized();
    // March 1 mm steps out to beyond the scene.
    bool hit = false;
    for (double s = 0.0; s <= 40.0; s += 0.001)
      if (point_in_pedestrian(scene, origin + s * dir)) {
        hit = true;
        break;
      }
    CHECK(sil.map.at(0, py, px) == (hit ? 1.0f : 0.0f));
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("rendering determinism and monotonicity under scene union") {
  const GridSpec grid = test_grid();
  nlohmann::json cfg{{"pedestrians",
                      {{"random_count", 4}, {"min_dist", 0.8}, {"margin", 1.0}}},
                     {"cameras", ring_config(3)}};
  const Scene scene = make_scene(cfg, grid, 5);

  const Silhouette s1 = render_silhouette(scene, 1, 320, 180, 4);
  const Silhouette s2 = render_silhouette(scene, 1, 320, 180, 4);
  for (int y = 0; y < 180; ++y)
    for (int x = 0; x < 320; ++x) {
      CHECK(s1.map.at(0, y, x) == s2.map.at(0, y, x));
      CHECK(s1.map.at(0, y, x) >= 0.0f);
      CHECK(s1.map.at(0, y, x) <= 1.0f);
    }

  // Adding a pedestrian never decreases any pixel value.
  Scene more = scene;
  Pedestrian extra;
  extra.foot = {0.0, 0.0};
  more.pedestrians.push_back(extra);
  const Silhouette s3 = render_silhouette(more, 1, 320, 180, 4);
  for (int y = 0; y < 180; ++y)
    for (int x = 0; x < 320; ++x)
      CHECK(s3.map.at(0, y, x) >= s1.map.at(0, y, x));
}

TEST_CASE("silhouette covers the projection of interior points") {
  const GridSpec grid = test_grid();
  nlohmann::json cfg{{"pedestrians",
                      {{"random_count", 8}, {"min_dist", 0.6}, {"margin", 1.0}}},
                     {"cameras", ring_config(5)}};
  const Scene scene = make_scene(cfg, grid, 21);
  std::mt19937_64 rng(77);

  for (std::size_t ci = 0; ci < scene.cameras.size(); ++ci) {
    const CameraModel& cam = scene.cameras[ci];
    const Silhouette sil = render_silhouette(scene, int(ci), cam.image_w,
                                             cam.image_h, 1);
    for (int k = 0; k < 300; ++k) {
      const auto& ped = scene.pedestrians[rng() % scene.pedestrians.size()];
      // Random point inside the capsule.
      const double az = uniform(rng, 0, 2 * M_PI);
      const double rr = ped.radius * std::sqrt(uniform(rng)) * 0.999;
      const double z = uniform(rng, ped.radius, ped.height - ped.radius);
      const Eigen::Vector3d p(ped.foot.x() + rr * std::cos(az),
                              ped.foot.y() + rr * std::sin(az), z);
      REQUIRE(point_in_pedestrian(scene, p));
      PixelProjection proj;
      if (!try_project(cam, p, proj) || proj.depth <= 0.0) continue;
      if (proj.u < 1.0 || proj.u > cam.image_w - 2 || proj.v < 1.0 ||
          proj.v > cam.image_h - 2)
        continue;
      // Bilinear coverage at the projection: what the hull pipeline samples.
      CHECK(bilinear_sample(sil.map, proj.u, proj.v) > 0.0);
      // Points clear of the surface also light the nearest pixel outright.
      if (rr < 0.9 * ped.radius)
        CHECK(sil.map.at(0, int(std::lround(proj.v)),
                         int(std::lround(proj.u))) == 1.0f);
    }
  }
}

TEST_CASE("ray_segment_distance against sampled minimization") {
  std::mt19937_64 rng(606);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Vector3d o(uniform(rng, -5, 5), uniform(rng, -5, 5),
                            uniform(rng, -5, 5));
    Eigen::Vector3d d(uniform(rng, -1, 1), uniform(rng, -1, 1),
                      uniform(rng, -1, 1));
    if (d.norm() < 1e-3) continue;
    d.normalize();
    const Eigen::Vector3d a(uniform(rng, -5, 5), uniform(rng, -5, 5),
                            uniform(rng, -5, 5));
    const Eigen::Vector3d b(uniform(rng, -5, 5), uniform(rng, -5, 5),
                            uniform(rng, -5, 5));
    const double got = ray_segment_distance(o, d, a, b);
    double best = 1e300;
    for (int si = 0; si <= 400; ++si)
      for (int ti = 0; ti <= 40; ++ti) {
        const double s = si * 0.05;
        const double t = ti / 40.0;
        best = std::min(best, (o + s * d - (a + t * (b - a))).norm());
      }
    CHECK(got <= best + 1e-9);          // never above any sampled value
    CHECK(got >= best - 0.05);          // close to the sampled minimum
  }
}
