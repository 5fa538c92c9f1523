#pragma once

#include <string>

#include "core/face_template.hpp"
#include "core/graph.hpp"
#include "core/types.hpp"

namespace facekit {

// Linear face model: graph-level identity/expression geometry bases and a
// full-resolution per-vertex albedo basis. Mesh-level bases are U*M_gid and
// U*M_gexp.
struct MorphableModel {
  MatX M_gid;   // 3G x m_i
  MatX M_gexp;  // 3G x m_e
  MatX M_R;     // 3N x m_r

  int m_i() const { return static_cast<int>(M_gid.cols()); }
  int m_e() const { return static_cast<int>(M_gexp.cols()); }
  int m_r() const { return static_cast<int>(M_R.cols()); }
};

// Small Gaussian init scaled by the template bounding box keeps first renders
// near the template.
MorphableModel init_model(const FaceTemplate& t, const DeformationGraph& g, int m_i, int m_e, int m_r,
                          uint64_t seed, double relative_std = 1e-3);

// V = V_bar + U*(M_gid*alpha + M_gexp*delta)
VecX assemble_geometry(const FaceTemplate& t, const DeformationGraph& g, const MorphableModel& m,
                       const VecX& alpha, const VecX& delta);

// Graph-level deformation field M_gid*alpha + M_gexp*delta (3G).
VecX graph_deformation(const MorphableModel& m, const VecX& alpha, const VecX& delta);

// R = R_bar + M_R*beta (unclamped; clamping happens at image write)
VecX assemble_reflectance(const FaceTemplate& t, const MorphableModel& m, const VecX& beta);

struct OrthogonalizeResult {
  bool regularized = false;  // rank-deficient normal equations were damped
};

// Replaces M_gid by its projection onto the orthogonal complement of the
// expression basis, measured in full mesh space through U. The projected
// mesh-level basis stays in range(U), so the graph-level pullback is exact.
OrthogonalizeResult orthogonalize_identity(MorphableModel& m, const DeformationGraph& g);

// max |(U M_gexp)^T (U M_gid)| / (||U M_gexp||_2 * ||U M_gid||_2)
double orthogonality_residual(const MorphableModel& m, const DeformationGraph& g);

void save_model(const MorphableModel& m, int vertex_count, int node_count, const std::string& path);
MorphableModel load_model(const std::string& path, int expected_vertices, int expected_nodes);

}  // namespace facekit
