#include "scene/pose.hpp"

#include <cmath>

namespace facekit {

namespace {

Mat3 rot_x(double a) {
  Mat3 m;
  m << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  return m;
}

Mat3 rot_y(double a) {
  Mat3 m;
  m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return m;
}

Mat3 rot_z(double a) {
  Mat3 m;
  m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return m;
}

Mat3 drot_x(double a) {
  Mat3 m;
  m << 0, 0, 0, 0, -std::sin(a), -std::cos(a), 0, std::cos(a), -std::sin(a);
  return m;
}

Mat3 drot_y(double a) {
  Mat3 m;
  m << -std::sin(a), 0, std::cos(a), 0, 0, 0, -std::cos(a), 0, -std::sin(a);
  return m;
}

Mat3 drot_z(double a) {
  Mat3 m;
  m << -std::sin(a), -std::cos(a), 0, std::cos(a), -std::sin(a), 0, 0, 0, 0;
  return m;
}

}  // namespace

Mat3 rotation_matrix(const Vec3& angles) {
  return rot_x(angles[0]) * rot_y(angles[1]) * rot_z(angles[2]);
}

std::array<Mat3, 3> rotation_matrix_derivatives(const Vec3& angles) {
  const Mat3 rx = rot_x(angles[0]);
  const Mat3 ry = rot_y(angles[1]);
  const Mat3 rz = rot_z(angles[2]);
  return {drot_x(angles[0]) * ry * rz, rx * drot_y(angles[1]) * rz, rx * ry * drot_z(angles[2])};
}

}  // namespace facekit
