#pragma once

#include <array>

#include "core/types.hpp"

namespace facekit {

// Euler convention used everywhere: intrinsic rotations about X, then the new
// Y, then the new Z, i.e. R = Rx(a) * Ry(b) * Rz(c) with right-handed
// standard axis matrices.
struct RigidPose {
  Vec3 rotation = Vec3::Zero();     // radians
  Vec3 translation = Vec3::Zero();  // model units

  static RigidPose from(const Vec3& angles, const Vec3& t) { return RigidPose{angles, t}; }
};

Mat3 rotation_matrix(const Vec3& angles);
std::array<Mat3, 3> rotation_matrix_derivatives(const Vec3& angles);

inline Vec3 apply_pose(const Vec3& v, const RigidPose& pose) {
  return rotation_matrix(pose.rotation) * v + pose.translation;
}

}  // namespace facekit
