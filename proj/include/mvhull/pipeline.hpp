#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "mvhull/detect.hpp"
#include "mvhull/eval.hpp"
#include "mvhull/feature_pull.hpp"
#include "mvhull/hull.hpp"
#include "mvhull/io.hpp"
#include "mvhull/scene.hpp"

namespace mvhull {

/// Everything a run needs; maps 1:1 onto the config JSON and the CLI flags.
/// A reconstruct manifest is itself a loadable config.
struct RunConfig {
  GridSpec grid = wildtrack_grid(4);
  nlohmann::json scene;          // resolved scene object (may be null)
  int blur_factor = 1;
  double blur_sigma = -1.0;      // < 0 selects the default factor/2
  double tau = 0.0;
  int min_views = 1;
  FusionMode fusion = FusionMode::kMultConcat;
  BevReduce bev = BevReduce::kMaxZ;
  double threshold = 0.4;
  int nms_radius = 1;
  MatchingMode matching = MatchingMode::kOptimal;
  double match_dist = 0.5;
  int supersample = 4;
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";
  std::filesystem::path features;      // optional volume dump to fuse
  std::filesystem::path dets;          // eval input; default <out>/detections.jsonl
  std::filesystem::path gt;            // eval input; default <out>/gt.jsonl
  std::filesystem::path render_input;  // render input; default <out>/bev.raw

  double effective_sigma() const {
    return blur_sigma >= 0.0 ? blur_sigma : blur_factor / 2.0;
  }
};

/// Throws ConfigError naming the offending field.
void validate_config(const RunConfig& cfg);

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

/// In-memory reconstruction products shared by the CLI and the tests.
struct Reconstruction {
  std::vector<OccupancyVolume> occ_views;
  std::vector<ValidityVolume> validity;
  CountVolume view_counts;
  OccupancyVolume vh;
  OccupancyVolume pvh;
  BevMap bev;
};

/// Runs preprocess -> pull per view -> N_v -> VH -> PVH -> compress on
/// already-rendered silhouettes. Cameras must be in the silhouettes' frame;
/// the blur factor's intrinsics rescale happens inside.
Reconstruction reconstruct_views(const std::vector<Silhouette>& silhouettes,
                                 const std::vector<CameraModel>& cameras,
                                 const RunConfig& cfg);

/// simulate: renders per-camera silhouette PGMs plus calibration JSON and
/// ground-truth JSON lines into cfg.out. Deterministic for a fixed seed.
void cmd_simulate(const RunConfig& cfg);

/// reconstruct: reads simulate's outputs from cfg.out, runs the hull
/// pipeline (fusing a feature dump if cfg.features is set), and writes
/// bev.pgm, bev.raw(+sidecar), and manifest.json.
void cmd_reconstruct(const RunConfig& cfg);

/// detect: decodes detections from <out>/bev.raw into detections.jsonl.
std::vector<Detection> cmd_detect(const RunConfig& cfg);

/// eval: matches detections against ground truth per frame and writes
/// report.json; also returns the report.
EvalReport cmd_eval(const RunConfig& cfg);

/// Aligned metrics table on stdout.
void print_report(const EvalReport& report);

/// render: kind "heatmap" writes a 16-bit PGM of a BEV dump; kind "overlay"
/// writes a PPM with ground-truth crosses and detection dots.
void cmd_render(const RunConfig& cfg, const std::string& kind);

}  // namespace mvhull
