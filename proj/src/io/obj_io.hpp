#pragma once

#include <array>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace facekit {

struct ObjMesh {
  VecX positions;                         // 3N stacked xyz
  VecX colors;                            // 3N stacked rgb, empty if absent
  std::vector<std::array<int, 3>> triangles;  // zero-based
};

ObjMesh load_obj(const std::string& path);

// Writes "v x y z [r g b]" and "f i j k" (1-based). Colors are the common
// vertex-color OBJ extension.
void save_obj(const std::string& path, const ObjMesh& mesh);

}  // namespace facekit
