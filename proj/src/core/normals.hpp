#pragma once

#include <array>
#include <vector>

#include "core/types.hpp"

namespace facekit {

struct NormalsResult {
  VecX unit;  // 3N unit vertex normals (fallback (0,0,1) at degenerate vertices)
  VecX raw;   // 3N area-weighted sums of incident face cross products
  std::vector<std::uint8_t> degenerate;
  int degenerate_count = 0;
};

NormalsResult compute_normals(const VecX& vertices, const std::vector<std::array<int, 3>>& triangles);

// Accumulates d(loss)/d(vertices) given d(loss)/d(unit normals). Degenerate
// vertices pass no gradient.
void normals_backward(const VecX& vertices, const std::vector<std::array<int, 3>>& triangles,
                      const NormalsResult& fwd, const VecX& d_unit, VecX& d_vertices);

}  // namespace facekit
