#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/types.hpp"
#include "loss/distance_transform.hpp"
#include "scene/camera.hpp"

namespace facekit {

struct LandmarkObs {
  Vec2 pos = Vec2::Zero();
  bool valid = false;
};

struct FrameObservation {
  Image image;  // HxWx3 in [0,1]
  std::vector<LandmarkObs> landmarks;
  LabelImage lips;
  bool is_neutral = false;

  // Distance transforms depend only on the lip labels; built once on demand.
  const DistanceTransformSet& dts() const;
  void invalidate_dts() { dt_cache_.reset(); }

 private:
  mutable std::shared_ptr<const DistanceTransformSet> dt_cache_;
};

struct ClipObservations {
  Camera camera;
  std::vector<FrameObservation> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
};

// Directory layout per clip: frame_k.png (8-bit), frame_k.pfm (float),
// frame_k.landmarks.txt (66 lines "x y valid"), frame_k.lips.png (labels
// 0/1/2), clip.json (camera + is_neutral flags).
ClipObservations load_clip_observations(const std::string& dir, bool prefer_float = true);
void save_clip_observations(const ClipObservations& clip, const std::string& dir, bool write_float = true);

}  // namespace facekit
