#pragma once

#include <array>
#include <vector>

#include "core/types.hpp"
#include "scene/camera.hpp"
#include "scene/pose.hpp"

namespace facekit {

constexpr int kNoTriangle = -1;

// Forward render buffers. bary stores perspective-correct coordinates, so
// interpolating camera-space vertex attributes with them reproduces the
// pixel-ray intersection (depth to 1e-6 relative).
struct RenderOutput {
  int width = 0;
  int height = 0;
  Image color;                    // clamped to [0,1]
  std::vector<double> raw_color;  // unclamped interpolation result
  std::vector<std::uint8_t> mask;
  std::vector<std::int32_t> tri_id;  // kNoTriangle where empty
  std::vector<double> bary;          // 3 per pixel
  std::vector<double> depth;         // camera z, +inf where empty

  size_t pixel(int x, int y) const { return static_cast<size_t>(y) * width + x; }
};

// Per-vertex camera data shared by the rasterizer, the landmark loss and the
// contour machinery.
struct ScreenVertices {
  VecX cam;     // 3N camera space (+z forward)
  VecX screen;  // 2N pixel coordinates
  std::vector<std::uint8_t> valid;  // z > near

  Vec2 screen_of(int v) const { return screen.segment<2>(2 * v); }
};

ScreenVertices transform_vertices(const VecX& vertices_model, const RigidPose& pose, const Camera& cam);

// Deterministic z-buffer rasterization: pixel-center sampling, top-left fill
// convention, depth ties broken by lower triangle index. Triangles with any
// vertex at or behind the near plane are clipped whole.
RenderOutput render(const ScreenVertices& sv, const std::vector<std::array<int, 3>>& triangles,
                    const VecX& vertex_colors, const Camera& cam, int threads = 1);

// Gradients of masked pixels with respect to vertex attributes. Visibility
// (mask and tri_id) is treated as locally constant.
struct RenderGrads {
  VecX d_colors;  // 3N, w.r.t. shaded vertex colors
  VecX d_screen;  // 2N
  VecX d_cam_z;   // N
};

RenderGrads render_backward(const RenderOutput& ro, const ScreenVertices& sv,
                            const std::vector<std::array<int, 3>>& triangles, const VecX& vertex_colors,
                            const Image& d_color);

// Adds the screen-position pull of one surface point handle (a rendered pixel
// of triangle `tri` with frozen barycentrics) into the gradient buffers.
void add_point_handle_gradient(const RenderOutput& ro, const std::vector<std::array<int, 3>>& triangles,
                               int tri, const Vec3& bary, const Vec2& d_pos, RenderGrads& grads);

}  // namespace facekit
