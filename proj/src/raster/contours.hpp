#pragma once

#include <vector>

#include "core/face_template.hpp"
#include "raster/raster.hpp"

namespace facekit {

// One point of a projected lip contour. Outer-contour elements are direct
// projections of annotated ring vertices; inner-contour elements are
// coverage-boundary pixels carrying their triangle/barycentric handle so the
// segmentation loss can backpropagate.
struct ContourElement {
  Vec2 pos = Vec2::Zero();
  int vertex = -1;  // >= 0 for projected ring vertices
  int tri = -1;     // >= 0 for coverage pixels
  Vec3 bary = Vec3::Zero();
};

struct LipContours {
  std::vector<ContourElement> upper_outer;
  std::vector<ContourElement> upper_inner;
  std::vector<ContourElement> lower_outer;
  std::vector<ContourElement> lower_inner;

  const std::vector<ContourElement>& get(int lip, int side) const {
    // lip: 0 upper, 1 lower; side: 0 outer, 1 inner
    if (lip == 0) return side == 0 ? upper_outer : upper_inner;
    return side == 0 ? lower_outer : lower_inner;
  }
};

// Per-triangle lip class: 0 none, 1 upper, 2 lower.
std::vector<std::uint8_t> build_triangle_lip_classes(const FaceTemplate& t);

// Rendered lip coverage as a label image (for IoU and mask emission).
LabelImage render_lip_labels(const RenderOutput& ro, const std::vector<std::uint8_t>& tri_classes);

// Outer contours: projections of the annotated outer ring vertices (behind-
// camera vertices dropped). Inner contours: rendered lip-coverage pixels
// adjacent (4-neighborhood) to the other lip's coverage or to uncovered
// pixels; visibility-aware, so rolled-in vertices are excluded.
LipContours extract_mesh_lip_contours(const RenderOutput& ro, const FaceTemplate& t,
                                      const ScreenVertices& sv,
                                      const std::vector<std::uint8_t>& tri_classes);

}  // namespace facekit
