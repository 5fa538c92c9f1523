#pragma once

#include <string>
#include <vector>

#include "core/face_template.hpp"
#include "core/types.hpp"

namespace facekit {

// Sparse upsampling operator U coupling graph-node deformations to the full
// mesh, plus the node adjacency used by the smoothness term. Constant after
// construction.
struct DeformationGraph {
  int node_count = 0;
  int vertex_count = 0;
  std::vector<int> node_ids;  // template vertex ids hosting the nodes
  VecX node_rest_positions;   // 3G

  // Per-vertex skinning rows (CSR): nonnegative weights summing to 1.
  std::vector<int> row_offsets;
  std::vector<int> row_nodes;
  std::vector<double> row_weights;

  std::vector<std::vector<int>> node_neighbors;

  // vertex_field(3N) = U * node_field(3G)
  void apply(const double* node_field, double* vertex_field) const;
  // node_field(3G) = U^T * vertex_field(3N)
  void apply_transpose(const double* vertex_field, double* node_field) const;
  MatX apply(const MatX& graph_columns) const;
  VecX apply(const VecX& node_field) const;
  VecX apply_transpose(const VecX& vertex_field) const;
};

// Geodesic distance over the mesh edge graph from a set of source vertices.
std::vector<double> mesh_geodesics(const FaceTemplate& t, const std::vector<int>& sources);

// k-nearest-node inverse-distance skinning on the template surface (geodesic
// edge-graph metric, so the two sides of the mouth slit stay independent).
// A vertex with no node within `radius` is a construction error naming the
// vertex. Node adjacency: k_adj nearest nodes, symmetrized.
DeformationGraph build_upsampling(const FaceTemplate& t, int k = 4,
                                  double radius = std::numeric_limits<double>::infinity(),
                                  int k_adj = 6);

}  // namespace facekit
