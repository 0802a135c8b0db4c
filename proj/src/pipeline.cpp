#include "mvhull/pipeline.hpp"

#include <cctype>
#include <cstdio>

namespace mvhull {

namespace {

std::string sanitize_name(const std::string& name, int index) {
  std::string out;
  for (char c : name)
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
      out += c;
  if (out.empty()) out = "cam" + std::to_string(index);
  return out;
}

std::filesystem::path silhouette_path(const RunConfig& cfg,
                                      const std::string& cam_name, int index) {
  return cfg.out / ("sil_" + sanitize_name(cam_name, index) + ".pgm");
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  validate_grid(cfg.grid);
  if (cfg.blur_factor < 1) throw ConfigError("blur_factor must be >= 1");
  if (!(cfg.tau >= 0.0)) throw ConfigError("tau must be >= 0");
  if (cfg.min_views < 1) throw ConfigError("min_views must be >= 1");
  if (cfg.threshold < 0.0)
    throw ConfigError("threshold must be >= 0 (values above 1 pass nothing)");
  if (cfg.nms_radius < 1) throw ConfigError("nms_radius must be >= 1");
  if (!(cfg.match_dist > 0.0)) throw ConfigError("match_dist must be > 0");
  if (cfg.supersample < 1) throw ConfigError("supersample must be >= 1");
  if (cfg.out.empty()) throw ConfigError("out directory must be set");
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  try {
    if (j.contains("grid")) cfg.grid = grid_from_json(j.at("grid"));
    if (j.contains("scene")) {
      if (j.at("scene").is_string())
        cfg.scene = load_json(j.at("scene").get<std::string>());
      else
        cfg.scene = j.at("scene");
    }
    cfg.blur_factor = j.value("blur_factor", cfg.blur_factor);
    cfg.blur_sigma = j.value("blur_sigma", cfg.blur_sigma);
    cfg.tau = j.value("tau", cfg.tau);
    cfg.min_views = j.value("min_views", cfg.min_views);
    if (j.contains("fusion"))
      cfg.fusion = parse_fusion_mode(j.at("fusion").get<std::string>());
    if (j.contains("bev"))
      cfg.bev = parse_bev_reduce(j.at("bev").get<std::string>());
    cfg.threshold = j.value("threshold", cfg.threshold);
    cfg.nms_radius = j.value("nms_radius", cfg.nms_radius);
    if (j.contains("matching"))
      cfg.matching = parse_matching_mode(j.at("matching").get<std::string>());
    cfg.match_dist = j.value("match_dist", cfg.match_dist);
    cfg.supersample = j.value("supersample", cfg.supersample);
    // The scene description may carry its own seed; an explicit config seed
    // wins.
    if (!cfg.scene.is_null() && cfg.scene.contains("seed") && !j.contains("seed"))
      cfg.seed = cfg.scene.at("seed").get<std::uint64_t>();
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("features")) cfg.features = j.at("features").get<std::string>();
    if (j.contains("dets")) cfg.dets = j.at("dets").get<std::string>();
    if (j.contains("gt")) cfg.gt = j.at("gt").get<std::string>();
    if (j.contains("render_input"))
      cfg.render_input = j.at("render_input").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad run config: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j{
      {"grid", grid_to_json(cfg.grid)},
      {"blur_factor", cfg.blur_factor},
      {"blur_sigma", cfg.blur_sigma},
      {"tau", cfg.tau},
      {"min_views", cfg.min_views},
      {"fusion", std::string(fusion_mode_name(cfg.fusion))},
      {"bev", std::string(bev_reduce_name(cfg.bev))},
      {"threshold", cfg.threshold},
      {"nms_radius", cfg.nms_radius},
      {"matching", std::string(matching_mode_name(cfg.matching))},
      {"match_dist", cfg.match_dist},
      {"supersample", cfg.supersample},
      {"seed", cfg.seed},
      {"out", cfg.out.string()}};
  if (!cfg.scene.is_null()) j["scene"] = cfg.scene;
  if (!cfg.features.empty()) j["features"] = cfg.features.string();
  if (!cfg.dets.empty()) j["dets"] = cfg.dets.string();
  if (!cfg.gt.empty()) j["gt"] = cfg.gt.string();
  if (!cfg.render_input.empty()) j["render_input"] = cfg.render_input.string();
  return j;
}

RunConfig load_config(const std::filesystem::path& path) {
  return config_from_json(load_json(path));
}

Reconstruction reconstruct_views(const std::vector<Silhouette>& silhouettes,
                                 const std::vector<CameraModel>& cameras,
                                 const RunConfig& cfg) {
  if (silhouettes.size() != cameras.size() || cameras.empty())
    throw DimensionMismatch("need one silhouette per camera");

  Reconstruction rec;
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    const Silhouette pre =
        preprocess_silhouette(silhouettes[i], cfg.blur_factor,
                              cfg.effective_sigma());
    const CameraModel cam =
        cfg.blur_factor > 1
            ? adjust_intrinsics(cameras[i], 1.0 / cfg.blur_factor)
            : cameras[i];
    PulledView pulled = pull_view(pre.map, cam, cfg.grid);
    rec.occ_views.push_back(as_occupancy(std::move(pulled.features)));
    rec.validity.push_back(std::move(pulled.validity));
  }
  rec.view_counts = valid_view_count(rec.validity);
  rec.vh = visual_hull(rec.occ_views, rec.validity, cfg.tau, cfg.min_views);
  rec.pvh = probabilistic_visual_hull(rec.occ_views, rec.validity, rec.vh);
  rec.bev = compress_bev(rec.pvh, cfg.bev);
  return rec;
}

void cmd_simulate(const RunConfig& cfg) {
  if (cfg.scene.is_null())
    throw ConfigError("simulate requires a scene (config field 'scene')");
  const Scene scene = make_scene(cfg.scene, cfg.grid, cfg.seed);

  std::filesystem::create_directories(cfg.out);
  save_cameras(cfg.out / "calibration.json", scene.cameras);

  for (std::size_t i = 0; i < scene.cameras.size(); ++i) {
    const CameraModel& cam = scene.cameras[i];
    const Silhouette sil = render_silhouette(scene, int(i), cam.image_w,
                                             cam.image_h, cfg.supersample);
    save_pgm8(silhouette_path(cfg, cam.name, int(i)), sil.map);
  }

  std::vector<FrameDetection> gt;
  for (const auto& foot : ground_truth(scene))
    gt.push_back({0, foot, 1.0});
  save_detections(cfg.out / "gt.jsonl", gt, /*with_score=*/false);

  nlohmann::json echo = cfg.scene;
  echo["seed"] = cfg.seed;
  save_json(cfg.out / "scene.json", echo);
}

void cmd_reconstruct(const RunConfig& cfg) {
  const auto cameras = load_cameras(cfg.out / "calibration.json");
  if (cameras.empty()) throw ConfigError("calibration file lists no cameras");

  std::vector<Silhouette> silhouettes;
  for (std::size_t i = 0; i < cameras.size(); ++i) {
    const auto path = silhouette_path(cfg, cameras[i].name, int(i));
    Silhouette sil{load_pgm8(path), cameras[i].name};
    if (sil.map.width() != cameras[i].image_w ||
        sil.map.height() != cameras[i].image_h)
      throw DimensionMismatch(
          "camera '" + cameras[i].name + "': silhouette is " +
          std::to_string(sil.map.width()) + "x" +
          std::to_string(sil.map.height()) + " but calibration says " +
          std::to_string(cameras[i].image_w) + "x" +
          std::to_string(cameras[i].image_h));
    silhouettes.push_back(std::move(sil));
  }

  Reconstruction rec = reconstruct_views(silhouettes, cameras, cfg);

  BevMap bev = rec.bev;
  if (!cfg.features.empty()) {
    const FeatureVolume features = load_volume(cfg.features);
    if (!features.same_voxels(rec.pvh.values))
      throw DimensionMismatch("feature volume dims do not match the grid");
    bev = compress_bev(fuse(features, rec.pvh, cfg.fusion), cfg.bev);
  }

  save_volume(cfg.out / "pvh.raw", rec.pvh.values);
  save_planar(cfg.out / "bev.raw", bev);
  save_pgm16(cfg.out / "bev.pgm", bev, 0, /*flip_rows=*/true);

  nlohmann::json manifest = config_to_json(cfg);
  manifest["_command"] = "reconstruct";
  manifest["_cameras"] = int(cameras.size());
  save_json(cfg.out / "manifest.json", manifest);
}

std::vector<Detection> cmd_detect(const RunConfig& cfg) {
  const BevMap bev = load_planar(cfg.out / "bev.raw");
  if (bev.channels() != 1)
    throw DimensionMismatch(
        "detect needs a 1-channel BEV (got " + std::to_string(bev.channels()) +
        " channels; fused volumes are not decodable)");
  const auto dets =
      decode_detections(bev, cfg.grid, cfg.threshold, cfg.nms_radius);

  std::vector<FrameDetection> rows;
  for (const auto& d : dets) rows.push_back({0, d.position, d.score});
  save_detections(cfg.out / "detections.jsonl", rows);
  return dets;
}

EvalReport cmd_eval(const RunConfig& cfg) {
  const auto dets_path = cfg.dets.empty() ? cfg.out / "detections.jsonl" : cfg.dets;
  const auto gt_path = cfg.gt.empty() ? cfg.out / "gt.jsonl" : cfg.gt;
  const auto det_frames = group_by_frame(load_detections(dets_path));
  const auto gt_frames = group_by_frame(load_detections(gt_path));

  for (const auto& [frame, rows] : det_frames)
    if (!gt_frames.count(frame))
      throw DimensionMismatch("detections contain frame " +
                              std::to_string(frame) +
                              " absent from the ground truth");

  std::vector<MatchResult> results;
  for (const auto& [frame, gt_rows] : gt_frames) {
    std::vector<Detection> dets;
    if (auto it = det_frames.find(frame); it != det_frames.end())
      for (const auto& r : it->second) dets.push_back({r.position, r.score});
    std::vector<Eigen::Vector2d> gts;
    for (const auto& r : gt_rows) gts.push_back(r.position);
    results.push_back(
        match_detections(dets, gts, cfg.match_dist, cfg.matching));
  }

  const EvalReport report = make_report(results, cfg.match_dist);
  save_json(cfg.out / "report.json", report_to_json(report));
  return report;
}

void print_report(const EvalReport& report) {
  std::printf("%-10s %8.4f\n", "MODA", report.moda);
  std::printf("%-10s %8.4f\n", "MODP", report.modp);
  std::printf("%-10s %8.4f\n", "Precision", report.precision);
  std::printf("%-10s %8.4f\n", "Recall", report.recall);
  std::printf("TP %d  FP %d  FN %d  GT %d\n", report.tp, report.fp, report.fn,
              report.n_gt);
}

namespace {

void draw_cross(RgbImage& img, int x, int y, unsigned char r, unsigned char g,
                unsigned char b, int arm) {
  auto put = [&](int px, int py) {
    if (px < 0 || px >= img.width || py < 0 || py >= img.height) return;
    unsigned char* p = img.at(py, px);
    p[0] = r;
    p[1] = g;
    p[2] = b;
  };
  for (int k = -arm; k <= arm; ++k) {
    put(x + k, y);
    put(x, y + k);
  }
}

}  // namespace

void cmd_render(const RunConfig& cfg, const std::string& kind) {
  if (kind == "heatmap") {
    const auto input =
        cfg.render_input.empty() ? cfg.out / "bev.raw" : cfg.render_input;
    const PlanarMap bev = load_planar(input);
    save_pgm16(cfg.out / "heatmap.pgm", bev, 0, /*flip_rows=*/true);
    return;
  }
  if (kind == "overlay") {
    const auto dets_path =
        cfg.dets.empty() ? cfg.out / "detections.jsonl" : cfg.dets;
    const auto gt_path = cfg.gt.empty() ? cfg.out / "gt.jsonl" : cfg.gt;
    const auto dets = load_detections(dets_path);
    const auto gts = load_detections(gt_path);

    RgbImage img(cfg.grid.nx, cfg.grid.ny);
    auto to_pixel = [&](const Eigen::Vector2d& pos, int& x, int& y) {
      const auto cell =
          world_to_cell(cfg.grid, {pos.x(), pos.y(), cfg.grid.origin.z()});
      if (!cell) return false;
      x = cell->ix;
      y = cfg.grid.ny - 1 - cell->iy;  // row 0 = max Y
      return true;
    };
    int x = 0, y = 0;
    for (const auto& g : gts)
      if (to_pixel(g.position, x, y)) draw_cross(img, x, y, 0, 255, 0, 2);
    for (const auto& d : dets)
      if (to_pixel(d.position, x, y)) draw_cross(img, x, y, 255, 64, 64, 0);
    save_ppm(cfg.out / "overlay.ppm", img);
    return;
  }
  throw UnknownMode("unknown render kind: " + kind);
}

}  // namespace mvhull
