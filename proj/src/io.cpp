#include "mvhull/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

namespace mvhull {

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = true) {
  ensure_parent_dir(path);
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = true) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return in;
}

}  // namespace

void ensure_parent_dir(const std::filesystem::path& path) {
  const auto dir = path.parent_path();
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir.string());
}

nlohmann::json load_json(const std::filesystem::path& path) {
  auto in = open_in(path, false);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

void save_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_out(path, false);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

CameraModel camera_from_json(const nlohmann::json& j) {
  CameraModel cam;
  try {
    cam.name = j.value("name", "");
    cam.fx = j.at("fx").get<double>();
    cam.fy = j.at("fy").get<double>();
    cam.cx = j.at("cx").get<double>();
    cam.cy = j.at("cy").get<double>();
    const auto R = j.at("R").get<std::vector<double>>();
    const auto t = j.at("t").get<std::vector<double>>();
    if (R.size() != 9 || t.size() != 3)
      throw ConfigError("camera '" + cam.name + "': R needs 9 values, t needs 3");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) cam.R(r, c) = R[r * 3 + c];
    cam.t = {t[0], t[1], t[2]};
    cam.image_w = j.at("width").get<int>();
    cam.image_h = j.at("height").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad camera calibration entry: ") + e.what());
  }
  validate_camera(cam);
  return cam;
}

nlohmann::json camera_to_json(const CameraModel& cam) {
  std::vector<double> R(9);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) R[r * 3 + c] = cam.R(r, c);
  return {{"name", cam.name}, {"fx", cam.fx},  {"fy", cam.fy},
          {"cx", cam.cx},     {"cy", cam.cy},  {"R", R},
          {"t", std::vector<double>{cam.t.x(), cam.t.y(), cam.t.z()}},
          {"width", cam.image_w}, {"height", cam.image_h}};
}

std::vector<CameraModel> load_cameras(const std::filesystem::path& path) {
  const nlohmann::json j = load_json(path);
  if (!j.is_array())
    throw ConfigError("calibration file must hold a JSON array: " + path.string());
  std::vector<CameraModel> cams;
  for (const auto& jc : j) cams.push_back(camera_from_json(jc));
  return cams;
}

void save_cameras(const std::filesystem::path& path,
                  const std::vector<CameraModel>& cams) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& cam : cams) j.push_back(camera_to_json(cam));
  save_json(path, j);
}

GridSpec grid_from_json(const nlohmann::json& j) {
  GridSpec g;
  try {
    if (j.contains("preset")) {
      const std::string preset = j.at("preset").get<std::string>();
      const int factor = j.value("factor", 1);
      if (preset == "wildtrack")
        g = wildtrack_grid(factor);
      else if (preset == "multiviewx")
        g = multiviewx_grid(factor);
      else
        throw ConfigError("unknown grid preset: " + preset);
      if (j.contains("origin")) {
        const auto o = j.at("origin").get<std::vector<double>>();
        if (o.size() != 3) throw ConfigError("grid origin needs 3 values");
        g.origin = {o[0], o[1], o[2]};
      }
      return g;
    }
    const auto o = j.at("origin").get<std::vector<double>>();
    if (o.size() != 3) throw ConfigError("grid origin needs 3 values");
    g.origin = {o[0], o[1], o[2]};
    g.cell_xy = j.at("cell_xy").get<double>();
    g.cell_z = j.at("cell_z").get<double>();
    g.nx = j.at("nx").get<int>();
    g.ny = j.at("ny").get<int>();
    g.nz = j.at("nz").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad grid spec: ") + e.what());
  }
  validate_grid(g);
  return g;
}

nlohmann::json grid_to_json(const GridSpec& grid) {
  return {{"origin", std::vector<double>{grid.origin.x(), grid.origin.y(),
                                         grid.origin.z()}},
          {"cell_xy", grid.cell_xy}, {"cell_z", grid.cell_z},
          {"nx", grid.nx},           {"ny", grid.ny},
          {"nz", grid.nz}};
}

void save_pgm8(const std::filesystem::path& path, const PlanarMap& map,
               int channel) {
  auto out = open_out(path);
  out << "P5\n" << map.width() << " " << map.height() << "\n255\n";
  std::vector<unsigned char> row(map.width());
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const double v = std::clamp(double(map.at(channel, y, x)), 0.0, 1.0);
      row[x] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

void read_pgm_header(std::istream& in, const std::filesystem::path& path,
                     int& width, int& height, int& maxval) {
  std::string magic;
  in >> magic;
  if (magic != "P5") throw IoError("not a binary PGM: " + path.string());
  auto next_int = [&](int& value) {
    // Skip whitespace and '#' comments.
    for (;;) {
      const int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    if (!(in >> value)) throw IoError("truncated PGM header: " + path.string());
  };
  next_int(width);
  next_int(height);
  next_int(maxval);
  in.get();  // single whitespace after maxval
}

}  // namespace

PlanarMap load_pgm8(const std::filesystem::path& path) {
  auto in = open_in(path);
  int width = 0, height = 0, maxval = 0;
  read_pgm_header(in, path, width, height, maxval);
  if (maxval != 255) throw IoError("expected 8-bit PGM: " + path.string());
  PlanarMap map(1, height, width);
  std::vector<unsigned char> row(width);
  for (int y = 0; y < height; ++y) {
    in.read(reinterpret_cast<char*>(row.data()), row.size());
    if (!in) throw IoError("truncated PGM payload: " + path.string());
    for (int x = 0; x < width; ++x) map.at(0, y, x) = row[x] / 255.0f;
  }
  return map;
}

void save_pgm16(const std::filesystem::path& path, const PlanarMap& map,
                int channel, bool flip_rows) {
  auto out = open_out(path);
  out << "P5\n" << map.width() << " " << map.height() << "\n65535\n";
  std::vector<unsigned char> row(std::size_t(map.width()) * 2);
  for (int y = 0; y < map.height(); ++y) {
    const int src = flip_rows ? map.height() - 1 - y : y;
    for (int x = 0; x < map.width(); ++x) {
      const double v = std::clamp(double(map.at(channel, src, x)), 0.0, 1.0);
      const unsigned s = unsigned(std::lround(v * 65535.0));
      row[2 * x] = static_cast<unsigned char>(s >> 8);
      row[2 * x + 1] = static_cast<unsigned char>(s & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void save_ppm(const std::filesystem::path& path, const RgbImage& img) {
  auto out = open_out(path);
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

void write_f32_le(std::ostream& out, const float* data, std::size_t count) {
  static_assert(sizeof(float) == 4);
  // Little-endian host assumed; bytes are written as stored.
  out.write(reinterpret_cast<const char*>(data), count * 4);
}

void read_f32_le(std::istream& in, float* data, std::size_t count,
                 const std::filesystem::path& path) {
  in.read(reinterpret_cast<char*>(data), count * 4);
  if (!in) throw IoError("truncated float payload: " + path.string());
}

}  // namespace

void save_volume(const std::filesystem::path& path, const FeatureVolume& vol) {
  auto out = open_out(path);
  write_f32_le(out, vol.data(), vol.size());
  if (!out) throw IoError("write failed: " + path.string());
  save_json(path.string() + ".json",
            {{"kind", "volume"}, {"channels", vol.channels()},
             {"ny", vol.ny()}, {"nz", vol.nz()}, {"nx", vol.nx()},
             {"dtype", "float32-le"}});
}

FeatureVolume load_volume(const std::filesystem::path& path) {
  const nlohmann::json side = load_json(path.string() + ".json");
  if (side.value("kind", "") != "volume")
    throw IoError("sidecar does not describe a volume: " + path.string());
  FeatureVolume vol(side.at("channels").get<int>(), side.at("ny").get<int>(),
                    side.at("nz").get<int>(), side.at("nx").get<int>());
  auto in = open_in(path);
  read_f32_le(in, vol.data(), vol.size(), path);
  return vol;
}

void save_planar(const std::filesystem::path& path, const PlanarMap& map) {
  auto out = open_out(path);
  write_f32_le(out, map.data(), map.size());
  if (!out) throw IoError("write failed: " + path.string());
  save_json(path.string() + ".json",
            {{"kind", "planar"}, {"channels", map.channels()},
             {"height", map.height()}, {"width", map.width()},
             {"dtype", "float32-le"}});
}

PlanarMap load_planar(const std::filesystem::path& path) {
  const nlohmann::json side = load_json(path.string() + ".json");
  if (side.value("kind", "") != "planar")
    throw IoError("sidecar does not describe a planar map: " + path.string());
  PlanarMap map(side.at("channels").get<int>(), side.at("height").get<int>(),
                side.at("width").get<int>());
  auto in = open_in(path);
  read_f32_le(in, map.data(), map.size(), path);
  return map;
}

void save_detections(const std::filesystem::path& path,
                     const std::vector<FrameDetection>& dets, bool with_score) {
  auto out = open_out(path, false);
  for (const auto& d : dets) {
    nlohmann::json j{{"frame", d.frame}, {"x", d.position.x()},
                     {"y", d.position.y()}};
    if (with_score) j["score"] = d.score;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<FrameDetection> load_detections(const std::filesystem::path& path) {
  auto in = open_in(path, false);
  std::vector<FrameDetection> dets;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      FrameDetection d;
      d.frame = j.value("frame", 0);
      d.position = {j.at("x").get<double>(), j.at("y").get<double>()};
      d.score = j.value("score", 1.0);
      dets.push_back(d);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": bad detection line: " + e.what());
    }
  }
  return dets;
}

std::map<int, std::vector<FrameDetection>> group_by_frame(
    const std::vector<FrameDetection>& dets) {
  std::map<int, std::vector<FrameDetection>> frames;
  for (const auto& d : dets) frames[d.frame].push_back(d);
  return frames;
}

nlohmann::json report_to_json(const EvalReport& r) {
  return {{"moda", r.moda}, {"modp", r.modp}, {"precision", r.precision},
          {"recall", r.recall}, {"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn},
          {"n_gt", r.n_gt}};
}

}  // namespace mvhull
