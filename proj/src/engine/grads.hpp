#pragma once

#include <vector>

#include "core/types.hpp"

namespace facekit {

struct FrameGrads {
  VecX delta;
  VecX gamma;  // 27
  Vec3 rot = Vec3::Zero();
  Vec3 trans = Vec3::Zero();
};

// Gradients of a clip loss with respect to every parameter block and, when
// requested, the model matrices.
struct ClipGrads {
  VecX alpha;
  VecX beta;
  std::vector<FrameGrads> frames;
  bool has_model_grads = false;
  MatX M_gid;
  MatX M_gexp;
  MatX M_R;

  void init(int m_i, int m_e, int m_r, int frame_count, int graph_rows, int mesh_rows, bool model_grads) {
    alpha = VecX::Zero(m_i);
    beta = VecX::Zero(m_r);
    frames.assign(frame_count, FrameGrads{});
    for (auto& f : frames) {
      f.delta = VecX::Zero(m_e);
      f.gamma = VecX::Zero(27);
    }
    has_model_grads = model_grads;
    if (model_grads) {
      M_gid = MatX::Zero(graph_rows, m_i);
      M_gexp = MatX::Zero(graph_rows, m_e);
      M_R = MatX::Zero(mesh_rows, m_r);
    } else {
      M_gid.resize(0, 0);
      M_gexp.resize(0, 0);
      M_R.resize(0, 0);
    }
  }
};

}  // namespace facekit
