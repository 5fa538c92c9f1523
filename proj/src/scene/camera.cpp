#include "scene/camera.hpp"

#include <nlohmann/json.hpp>

#include "common/errors.hpp"

namespace facekit {

Vec2 project(const Vec3& v_cam, const Camera& cam) {
  if (!(v_cam.z() > kCameraNear)) {
    throw ContractError("project: point at or behind the camera plane");
  }
  return cam.principal + cam.focal * Vec2(v_cam.x() / v_cam.z(), v_cam.y() / v_cam.z());
}

Eigen::Matrix<double, 2, 3> projection_jacobian(const Vec3& v_cam, const Camera& cam) {
  const double z = v_cam.z();
  Eigen::Matrix<double, 2, 3> jac;
  jac << cam.focal / z, 0.0, -cam.focal * v_cam.x() / (z * z),
         0.0, cam.focal / z, -cam.focal * v_cam.y() / (z * z);
  return jac;
}

Camera default_camera(const FaceTemplate& t, int width, int height, double rest_distance) {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (int v = 0; v < t.vertex_count; ++v) {
    lo = lo.cwiseMin(t.vertex(v));
    hi = hi.cwiseMax(t.vertex(v));
  }
  const double span = std::max(hi.x() - lo.x(), hi.y() - lo.y());
  require(span > 0.0 && rest_distance > 0.0, "default_camera: degenerate template or distance");
  Camera cam;
  cam.width = width;
  cam.height = height;
  cam.principal = Vec2(width / 2.0, height / 2.0);
  cam.focal = 0.75 * width * rest_distance / span;
  return cam;
}

void to_json(nlohmann::json& j, const Camera& c) {
  j = nlohmann::json{{"focal", c.focal},
                     {"principal", {c.principal.x(), c.principal.y()}},
                     {"width", c.width},
                     {"height", c.height}};
}

void from_json(const nlohmann::json& j, Camera& c) {
  c.focal = j.at("focal").get<double>();
  const auto pp = j.at("principal").get<std::vector<double>>();
  if (pp.size() != 2) throw DataError("camera principal point must have 2 entries");
  c.principal = Vec2(pp[0], pp[1]);
  c.width = j.at("width").get<int>();
  c.height = j.at("height").get<int>();
}

}  // namespace facekit
