#pragma once

#include <filesystem>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "mvhull/camera.hpp"
#include "mvhull/eval.hpp"
#include "mvhull/grid.hpp"
#include "mvhull/image.hpp"
#include "mvhull/volume.hpp"

namespace mvhull {

// --- camera calibration -----------------------------------------------

CameraModel camera_from_json(const nlohmann::json& j);
nlohmann::json camera_to_json(const CameraModel& cam);

/// Calibration file: a JSON array with one object per camera.
std::vector<CameraModel> load_cameras(const std::filesystem::path& path);
void save_cameras(const std::filesystem::path& path,
                  const std::vector<CameraModel>& cams);

// --- grid --------------------------------------------------------------

GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json grid_to_json(const GridSpec& grid);

// --- images ------------------------------------------------------------

/// 8-bit binary PGM; values are clamped to [0,1] and scaled by 255.
void save_pgm8(const std::filesystem::path& path, const PlanarMap& map,
               int channel = 0);
PlanarMap load_pgm8(const std::filesystem::path& path);

/// 16-bit binary PGM (big-endian samples per the format); values clamped to
/// [0,1] and scaled by 65535. flip_rows writes row 0 = max Y, the BEV export
/// orientation.
void save_pgm16(const std::filesystem::path& path, const PlanarMap& map,
                int channel = 0, bool flip_rows = false);

/// 24-bit binary PPM.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<unsigned char> pixels;  // 3 bytes per pixel, row-major

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), pixels(std::size_t(3) * w * h) {}
  unsigned char* at(int y, int x) {
    return pixels.data() + (std::size_t(y) * width + x) * 3;
  }
};
void save_ppm(const std::filesystem::path& path, const RgbImage& img);

// --- raw float dumps ----------------------------------------------------

/// Little-endian float32 payload with a JSON sidecar (same path + ".json")
/// recording the dims as {"channels", "ny", "nz", "nx"} for volumes or
/// {"channels", "height", "width"} for planar maps.
void save_volume(const std::filesystem::path& path, const FeatureVolume& vol);
FeatureVolume load_volume(const std::filesystem::path& path);
void save_planar(const std::filesystem::path& path, const PlanarMap& map);
PlanarMap load_planar(const std::filesystem::path& path);

// --- detections / ground truth ------------------------------------------

struct FrameDetection {
  int frame = 0;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double score = 1.0;
};

/// JSON-lines detection files: {"frame", "x", "y", "score"} per line; the
/// ground-truth flavor omits the score.
void save_detections(const std::filesystem::path& path,
                     const std::vector<FrameDetection>& dets,
                     bool with_score = true);
std::vector<FrameDetection> load_detections(const std::filesystem::path& path);

/// Groups detections by frame key, preserving in-file order.
std::map<int, std::vector<FrameDetection>> group_by_frame(
    const std::vector<FrameDetection>& dets);

nlohmann::json report_to_json(const EvalReport& report);

// --- helpers --------------------------------------------------------------

nlohmann::json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const nlohmann::json& j);
void ensure_parent_dir(const std::filesystem::path& path);

}  // namespace mvhull
