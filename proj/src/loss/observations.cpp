#include "loss/observations.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "common/errors.hpp"
#include "io/image_io.hpp"

namespace facekit {

namespace fs = std::filesystem;
using nlohmann::json;

const DistanceTransformSet& FrameObservation::dts() const {
  if (!dt_cache_) dt_cache_ = std::make_shared<DistanceTransformSet>(build_distance_transform_set(lips));
  return *dt_cache_;
}

ClipObservations load_clip_observations(const std::string& dir, bool prefer_float) {
  const fs::path base(dir);
  std::ifstream is(base / "clip.json");
  if (!is) throw DataError("cannot open clip.json in " + dir);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw DataError("clip.json parse error: " + std::string(e.what()));
  }
  ClipObservations clip;
  clip.camera = j.at("camera").get<Camera>();
  const auto neutral = j.at("is_neutral").get<std::vector<bool>>();

  for (size_t k = 0; k < neutral.size(); ++k) {
    FrameObservation f;
    const std::string stem = "frame_" + std::to_string(k);
    const fs::path pfm = base / (stem + ".pfm");
    if (prefer_float && fs::exists(pfm)) {
      f.image = read_pfm(pfm.string());
    } else {
      f.image = read_png((base / (stem + ".png")).string());
    }
    if (f.image.channels != 3) throw DataError("frame image must be RGB: " + stem);

    std::ifstream lf(base / (stem + ".landmarks.txt"));
    if (!lf) throw DataError("missing landmarks for " + stem + " in " + dir);
    double x, y;
    int valid;
    while (lf >> x >> y >> valid) {
      LandmarkObs l;
      l.pos = Vec2(x, y);
      l.valid = valid != 0;
      f.landmarks.push_back(l);
    }
    f.lips = read_label_png((base / (stem + ".lips.png")).string());
    if (f.lips.width != f.image.width || f.lips.height != f.image.height) {
      throw DataError("lip mask size mismatch for " + stem);
    }
    f.is_neutral = neutral[k];
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

void save_clip_observations(const ClipObservations& clip, const std::string& dir, bool write_float) {
  const fs::path base(dir);
  fs::create_directories(base);
  json j;
  j["camera"] = clip.camera;
  std::vector<bool> neutral;
  for (const auto& f : clip.frames) neutral.push_back(f.is_neutral);
  j["is_neutral"] = neutral;
  std::ofstream os(base / "clip.json");
  if (!os) throw DataError("cannot write clip.json in " + dir);
  os << j.dump(2) << "\n";

  char buf[64];
  for (size_t k = 0; k < clip.frames.size(); ++k) {
    const auto& f = clip.frames[k];
    std::snprintf(buf, sizeof(buf), "frame_%zu", k);
    const std::string stem(buf);
    write_png((base / (stem + ".png")).string(), f.image);
    if (write_float) write_pfm((base / (stem + ".pfm")).string(), f.image);
    std::ofstream lf(base / (stem + ".landmarks.txt"));
    for (const auto& l : f.landmarks) {
      std::snprintf(buf, sizeof(buf), "%.10f %.10f %d\n", l.pos.x(), l.pos.y(), l.valid ? 1 : 0);
      lf << buf;
    }
    write_label_png((base / (stem + ".lips.png")).string(), f.lips);
  }
}

}  // namespace facekit
