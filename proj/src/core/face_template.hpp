#pragma once

#include <array>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace facekit {

// Lip boundary chains. Each chain runs mouth-corner to mouth-corner and
// includes both corner vertices; outer+inner chains of one lip share exactly
// those two endpoints and together form a closed simple loop bounding the
// lip band. The two inner chains coincide geometrically when the mouth is
// closed but are distinct vertices, so expressions can open the slit.
struct LipRings {
  std::vector<int> upper_outer;
  std::vector<int> upper_inner;
  std::vector<int> lower_outer;
  std::vector<int> lower_inner;
};

// A landmark that slides along a candidate ring (face silhouette): per frame
// the candidate whose projection is extremal along the outward image
// direction is selected.
struct ContourLandmark {
  int landmark_index = -1;
  std::vector<int> candidates;
};

struct FaceTemplate {
  int vertex_count = 0;
  std::vector<std::array<int, 3>> triangles;
  VecX mean_positions;     // 3N stacked xyz (model units, mm)
  VecX mean_reflectance;   // 3N stacked rgb in [0,1]
  std::vector<int> landmark_vertex_ids;  // 66 entries
  std::vector<ContourLandmark> contour_landmarks;
  LipRings lip_rings;
  std::vector<int> graph_node_ids;

  // Derived by finalize():
  std::vector<std::vector<int>> vertex_neighbors;
  std::vector<int> upper_lip_vertices;
  std::vector<int> lower_lip_vertices;
  std::vector<int> upper_lip_triangles;  // triangle indices
  std::vector<int> lower_lip_triangles;

  int graph_node_count() const { return static_cast<int>(graph_node_ids.size()); }
  double bbox_diagonal() const;
  Vec3 vertex(int v) const { return mean_positions.segment<3>(3 * v); }

  // Validates invariants and derives adjacency and lip regions.
  void finalize();
};

constexpr int kLandmarkCount = 66;

FaceTemplate load_face_template(const std::string& obj_path, const std::string& sidecar_path);
void save_face_template(const FaceTemplate& t, const std::string& obj_path, const std::string& sidecar_path);

std::vector<std::vector<int>> build_vertex_adjacency(int vertex_count,
                                                     const std::vector<std::array<int, 3>>& triangles);

}  // namespace facekit
