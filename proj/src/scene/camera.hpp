#pragma once

#include <nlohmann/json_fwd.hpp>

#include "core/face_template.hpp"
#include "core/types.hpp"

namespace facekit {

// Fixed-intrinsics pinhole camera. World space is y-up with the camera at the
// origin looking down -z; camera space is +z forward, +y down (image rows),
// so p = principal + focal * (x/z, y/z) with z > near.
struct Camera {
  double focal = 0.0;  // pixels
  Vec2 principal = Vec2::Zero();
  int width = 0;
  int height = 0;
};

constexpr double kCameraNear = 1e-6;

inline Vec3 world_to_camera(const Vec3& w) { return {w.x(), -w.y(), -w.z()}; }

Vec2 project(const Vec3& v_cam, const Camera& cam);  // throws ContractError behind camera

// dp/dv_cam, 2x3.
Eigen::Matrix<double, 2, 3> projection_jacobian(const Vec3& v_cam, const Camera& cam);

// Focal such that the template at rest distance spans ~75% of the frame width.
Camera default_camera(const FaceTemplate& t, int width, int height, double rest_distance);

void to_json(nlohmann::json& j, const Camera& c);
void from_json(const nlohmann::json& j, Camera& c);

}  // namespace facekit
