#pragma once

#include <string>
#include <vector>

#include "core/types.hpp"

namespace facekit {

constexpr int kShCoeffs = 9;
constexpr int kGammaSize = 27;  // 9 SH coefficients per RGB channel, channel-major

struct FrameParams {
  VecX delta;        // m_e expression coefficients
  VecX gamma;        // 27 illumination coefficients
  Vec3 rotation;     // Euler angles, radians (intrinsic X-then-Y-then-Z)
  Vec3 translation;  // model units

  FrameParams() : gamma(VecX::Zero(kGammaSize)), rotation(Vec3::Zero()), translation(Vec3::Zero()) {}
};

// Identity and albedo coefficients are shared across all frames of a clip.
struct ClipParams {
  VecX alpha;  // m_i
  VecX beta;   // m_r
  std::vector<FrameParams> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
};

ClipParams make_clip_params(int m_i, int m_e, int m_r, int frames);

void save_clip_params(const ClipParams& p, const std::string& path);
ClipParams load_clip_params(const std::string& path);

}  // namespace facekit
