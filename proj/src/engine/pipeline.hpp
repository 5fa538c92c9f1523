#pragma once

#include <array>
#include <vector>

#include "core/face_template.hpp"
#include "core/graph.hpp"
#include "core/model.hpp"
#include "core/normals.hpp"
#include "core/params.hpp"
#include "engine/grads.hpp"
#include "raster/raster.hpp"
#include "scene/camera.hpp"
#include "scene/sh.hpp"

namespace facekit {

struct FrameContext {
  const FaceTemplate* face = nullptr;
  const DeformationGraph* graph = nullptr;
  const MorphableModel* model = nullptr;
  const Camera* camera = nullptr;
};

// All intermediates of one rendered frame, kept for the hand-rolled reverse
// pass.
struct FrameForward {
  VecX alpha, delta, beta, gamma;
  Vec3 rot_angles = Vec3::Zero(), translation = Vec3::Zero();
  Mat3 rot;
  std::array<Mat3, 3> drot;

  VecX graph_field;  // 3G deformation at the graph nodes
  VecX geometry;     // 3N model space
  VecX reflectance;  // 3N
  NormalsResult normals;
  VecX world_normals;                      // 3N
  std::vector<std::array<double, 9>> sh;   // per vertex, at world normal
  VecX irradiance;                         // 3N per channel
  VecX colors;                             // 3N shaded, unclamped
  ScreenVertices sv;
  RenderOutput ro;
};

void forward_frame(const FrameContext& ctx, const ClipParams& clip, int frame_index, FrameForward& out,
                   int threads = 1);

// Loss-side gradient sinks collected before the engine reverse pass.
struct FrameBackInputs {
  Image d_color;  // dL/dS on the clamped render
  std::vector<std::pair<int, Vec2>> d_vertex_screen;
  struct HandleGrad {
    int tri;
    Vec3 bary;
    Vec2 d_pos;
  };
  std::vector<HandleGrad> d_point_handles;
  VecX d_delta_direct;   // added straight to g_delta (disentanglement)
  VecX d_graph_field;    // dL/d(graph deformation), 3G (smoothness)

  void init(int width, int height, int m_e, int graph_rows) {
    d_color = Image(width, height, 3);
    d_vertex_screen.clear();
    d_point_handles.clear();
    d_delta_direct = VecX::Zero(m_e);
    d_graph_field = VecX::Zero(graph_rows);
  }
};

// Accumulates this frame's gradients into `out` (alpha/beta/matrix blocks sum
// across frames; delta/gamma/pose go to out.frames[frame_index]).
void backward_frame(const FrameContext& ctx, const FrameForward& fwd, const FrameBackInputs& back,
                    int frame_index, ClipGrads& out);

}  // namespace facekit
