#include "raster/contours.hpp"

namespace facekit {

std::vector<std::uint8_t> build_triangle_lip_classes(const FaceTemplate& t) {
  std::vector<std::uint8_t> cls(t.triangles.size(), 0);
  for (int i : t.upper_lip_triangles) cls[static_cast<size_t>(i)] = kLipLabelUpper;
  for (int i : t.lower_lip_triangles) cls[static_cast<size_t>(i)] = kLipLabelLower;
  return cls;
}

LabelImage render_lip_labels(const RenderOutput& ro, const std::vector<std::uint8_t>& tri_classes) {
  LabelImage out(ro.width, ro.height);
  for (int y = 0; y < ro.height; ++y) {
    for (int x = 0; x < ro.width; ++x) {
      const size_t p = ro.pixel(x, y);
      if (ro.mask[p] != 0) out.at(x, y) = tri_classes[static_cast<size_t>(ro.tri_id[p])];
    }
  }
  return out;
}

namespace {

void project_ring(const std::vector<int>& ring, const ScreenVertices& sv,
                  std::vector<ContourElement>& out) {
  for (int v : ring) {
    if (sv.valid[static_cast<size_t>(v)] == 0) continue;
    ContourElement e;
    e.pos = sv.screen_of(v);
    e.vertex = v;
    out.push_back(e);
  }
}

void inner_boundary(const RenderOutput& ro, const LabelImage& labels,
                    const std::vector<std::uint8_t>& /*tri_classes*/, std::uint8_t own,
                    std::uint8_t other, std::vector<ContourElement>& out) {
  const int W = ro.width, H = ro.height;
  auto label_at = [&](int x, int y) -> int {
    if (x < 0 || y < 0 || x >= W || y >= H) return -1;  // outside = uncovered
    if (ro.mask[ro.pixel(x, y)] == 0) return -1;
    return labels.at(x, y);
  };
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (label_at(x, y) != own) continue;
      const int nb[4] = {label_at(x - 1, y), label_at(x + 1, y), label_at(x, y - 1), label_at(x, y + 1)};
      bool boundary = false;
      for (int l : nb) {
        if (l == -1 || l == other) {
          boundary = true;
          break;
        }
      }
      if (!boundary) continue;
      const size_t p = ro.pixel(x, y);
      ContourElement e;
      e.pos = Vec2(x + 0.5, y + 0.5);
      e.tri = ro.tri_id[p];
      e.bary = Vec3(ro.bary[3 * p], ro.bary[3 * p + 1], ro.bary[3 * p + 2]);
      out.push_back(e);
    }
  }
}

}  // namespace

LipContours extract_mesh_lip_contours(const RenderOutput& ro, const FaceTemplate& t,
                                      const ScreenVertices& sv,
                                      const std::vector<std::uint8_t>& tri_classes) {
  LipContours c;
  project_ring(t.lip_rings.upper_outer, sv, c.upper_outer);
  project_ring(t.lip_rings.lower_outer, sv, c.lower_outer);
  const LabelImage labels = render_lip_labels(ro, tri_classes);
  inner_boundary(ro, labels, tri_classes, kLipLabelUpper, kLipLabelLower, c.upper_inner);
  inner_boundary(ro, labels, tri_classes, kLipLabelLower, kLipLabelUpper, c.lower_inner);
  return c;
}

}  // namespace facekit
