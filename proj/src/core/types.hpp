#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace facekit {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Row-major, channel-interleaved double image. Values are linear color in
// [0,1] once written to disk; intermediate buffers may exceed that range.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, int c) : width(w), height(h), channels(c), data(static_cast<size_t>(w) * h * c, 0.0) {}

  double& at(int x, int y, int c) { return data[(static_cast<size_t>(y) * width + x) * channels + c]; }
  double at(int x, int y, int c) const { return data[(static_cast<size_t>(y) * width + x) * channels + c]; }
  size_t size() const { return data.size(); }
  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

// Small-integer label image (lip masks: 0 background, 1 upper lip, 2 lower lip).
struct LabelImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  LabelImage() = default;
  LabelImage(int w, int h) : width(w), height(h), data(static_cast<size_t>(w) * h, 0) {}

  std::uint8_t& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
};

constexpr std::uint8_t kLipLabelBackground = 0;
constexpr std::uint8_t kLipLabelUpper = 1;
constexpr std::uint8_t kLipLabelLower = 2;

}  // namespace facekit
