#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "mvhull/pipeline.hpp"

namespace {

using mvhull::RunConfig;

struct CliOverrides {
  std::string config_path;
  std::string grid;
  std::string scene;
  std::string fusion, bev, matching;
  std::string out, features, dets, gt, render_input;
  int blur_factor = -1, min_views = -1, nms_radius = -1, supersample = -1;
  double blur_sigma = -2.0, tau = -1.0, threshold = -1.0, match_dist = -1.0;
  long long seed = -1;
  std::string render_kind = "heatmap";
};

mvhull::GridSpec parse_grid_flag(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  int factor = 1;
  if (colon != std::string::npos)
    factor = std::stoi(text.substr(colon + 1));
  if (name == "wildtrack") return mvhull::wildtrack_grid(factor);
  if (name == "multiviewx") return mvhull::multiviewx_grid(factor);
  throw mvhull::ConfigError("unknown grid preset: " + name +
                            " (use wildtrack[:factor] or multiviewx[:factor])");
}

RunConfig resolve_config(const CliOverrides& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = mvhull::load_config(o.config_path);
  if (!o.grid.empty()) cfg.grid = parse_grid_flag(o.grid);
  if (!o.scene.empty()) cfg.scene = mvhull::load_json(o.scene);
  if (o.blur_factor >= 0) cfg.blur_factor = o.blur_factor;
  if (o.blur_sigma >= -1.0) cfg.blur_sigma = o.blur_sigma;
  if (o.tau >= 0.0) cfg.tau = o.tau;
  if (o.min_views >= 0) cfg.min_views = o.min_views;
  if (!o.fusion.empty()) cfg.fusion = mvhull::parse_fusion_mode(o.fusion);
  if (!o.bev.empty()) cfg.bev = mvhull::parse_bev_reduce(o.bev);
  if (o.threshold >= 0.0) cfg.threshold = o.threshold;
  if (o.nms_radius >= 0) cfg.nms_radius = o.nms_radius;
  if (!o.matching.empty()) cfg.matching = mvhull::parse_matching_mode(o.matching);
  if (o.match_dist >= 0.0) cfg.match_dist = o.match_dist;
  if (o.supersample >= 0) cfg.supersample = o.supersample;
  if (o.seed >= 0) cfg.seed = std::uint64_t(o.seed);
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.features.empty()) cfg.features = o.features;
  if (!o.dets.empty()) cfg.dets = o.dets;
  if (!o.gt.empty()) cfg.gt = o.gt;
  if (!o.render_input.empty()) cfg.render_input = o.render_input;
  mvhull::validate_config(cfg);
  return cfg;
}

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "run config JSON; flags override");
  cmd->add_option("--grid", o.grid, "grid preset, e.g. wildtrack:4");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visual-hull multi-view pedestrian detection pipeline"};
  app.require_subcommand(1);

  CliOverrides o;

  CLI::App* sim = app.add_subcommand(
      "simulate", "render synthetic silhouettes, calibration, and ground truth");
  add_common_flags(sim, o);
  sim->add_option("--scene", o.scene, "scene JSON file");
  sim->add_option("--supersample", o.supersample, "sub-rays per pixel axis");

  CLI::App* rec = app.add_subcommand(
      "reconstruct", "silhouettes -> PVH -> BEV occupancy map");
  add_common_flags(rec, o);
  rec->add_option("--blur-factor", o.blur_factor, "silhouette downsample factor");
  rec->add_option("--blur-sigma", o.blur_sigma,
                  "Gaussian sigma (default factor/2)");
  rec->add_option("--tau", o.tau, "hull occupancy threshold");
  rec->add_option("--min-views", o.min_views, "minimum observing views");
  rec->add_option("--fusion", o.fusion,
                  "concat | mult | mult_add | mult_concat");
  rec->add_option("--bev", o.bev, "max_z | mean_z | sum_z");
  rec->add_option("--features", o.features, "feature volume dump to fuse");

  CLI::App* det = app.add_subcommand("detect", "decode detections from the BEV");
  add_common_flags(det, o);
  det->add_option("--threshold", o.threshold, "peak threshold");
  det->add_option("--nms-radius", o.nms_radius, "NMS window radius in cells");

  CLI::App* ev = app.add_subcommand("eval", "score detections against ground truth");
  add_common_flags(ev, o);
  ev->add_option("--dets", o.dets, "detections JSONL");
  ev->add_option("--gt", o.gt, "ground-truth JSONL");
  ev->add_option("-t,--t", o.match_dist, "matching gate in meters");
  ev->add_option("--matching", o.matching, "optimal | greedy");

  CLI::App* ren = app.add_subcommand("render", "write PGM/PPM visualizations");
  add_common_flags(ren, o);
  ren->add_option("--kind", o.render_kind, "heatmap | overlay");
  ren->add_option("--input", o.render_input, "raw dump to render");
  ren->add_option("--dets", o.dets, "detections JSONL (overlay)");
  ren->add_option("--gt", o.gt, "ground-truth JSONL (overlay)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const RunConfig cfg = resolve_config(o);
    if (sim->parsed()) mvhull::cmd_simulate(cfg);
    if (rec->parsed()) mvhull::cmd_reconstruct(cfg);
    if (det->parsed()) {
      const auto dets = mvhull::cmd_detect(cfg);
      std::printf("%zu detections\n", dets.size());
    }
    if (ev->parsed()) mvhull::print_report(mvhull::cmd_eval(cfg));
    if (ren->parsed()) mvhull::cmd_render(cfg, o.render_kind);
  } catch (const mvhull::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const mvhull::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const mvhull::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 0;
}
