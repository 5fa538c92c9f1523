#include "core/normals.hpp"

#include "common/errors.hpp"

namespace facekit {

namespace {
constexpr double kDegenerateNorm = 1e-12;
}

NormalsResult compute_normals(const VecX& vertices, const std::vector<std::array<int, 3>>& triangles) {
  const Eigen::Index n3 = vertices.size();
  require(n3 % 3 == 0, "vertex buffer must be 3N");
  NormalsResult res;
  res.raw = VecX::Zero(n3);
  res.unit.resize(n3);
  res.degenerate.assign(static_cast<size_t>(n3 / 3), 0);

  for (const auto& t : triangles) {
    const Vec3 a = vertices.segment<3>(3 * t[0]);
    const Vec3 e1 = Vec3(vertices.segment<3>(3 * t[1])) - a;
    const Vec3 e2 = Vec3(vertices.segment<3>(3 * t[2])) - a;
    const Vec3 fn = e1.cross(e2);  // 2*area times the unit face normal
    for (int i : t) res.raw.segment<3>(3 * i) += fn;
  }
  for (Eigen::Index v = 0; v < n3 / 3; ++v) {
    const Vec3 r = res.raw.segment<3>(3 * v);
    const double norm = r.norm();
    if (norm < kDegenerateNorm) {
      res.unit.segment<3>(3 * v) = Vec3(0, 0, 1);
      res.degenerate[static_cast<size_t>(v)] = 1;
      ++res.degenerate_count;
    } else {
      res.unit.segment<3>(3 * v) = r / norm;
    }
  }
  return res;
}

void normals_backward(const VecX& vertices, const std::vector<std::array<int, 3>>& triangles,
                      const NormalsResult& fwd, const VecX& d_unit, VecX& d_vertices) {
  require(d_unit.size() == vertices.size(), "d_unit size mismatch");
  require(d_vertices.size() == vertices.size(), "d_vertices size mismatch");
  const Eigen::Index n = vertices.size() / 3;

  VecX d_raw = VecX::Zero(vertices.size());
  for (Eigen::Index v = 0; v < n; ++v) {
    if (fwd.degenerate[static_cast<size_t>(v)] != 0) continue;
    const Vec3 u = fwd.unit.segment<3>(3 * v);
    const Vec3 g = d_unit.segment<3>(3 * v);
    const double norm = fwd.raw.segment<3>(3 * v).norm();
    d_raw.segment<3>(3 * v) = (g - u * u.dot(g)) / norm;
  }

  for (const auto& t : triangles) {
    const Vec3 gn = Vec3(d_raw.segment<3>(3 * t[0])) + Vec3(d_raw.segment<3>(3 * t[1])) +
                    Vec3(d_raw.segment<3>(3 * t[2]));
    if (gn.isZero(0.0)) continue;
    const Vec3 a = vertices.segment<3>(3 * t[0]);
    const Vec3 e1 = Vec3(vertices.segment<3>(3 * t[1])) - a;
    const Vec3 e2 = Vec3(vertices.segment<3>(3 * t[2])) - a;
    const Vec3 d_e1 = e2.cross(gn);
    const Vec3 d_e2 = gn.cross(e1);
    d_vertices.segment<3>(3 * t[0]) -= d_e1 + d_e2;
    d_vertices.segment<3>(3 * t[1]) += d_e1;
    d_vertices.segment<3>(3 * t[2]) += d_e2;
  }
}

}  // namespace facekit
