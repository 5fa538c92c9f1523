#pragma once

#include <utility>
#include <vector>

#include "core/types.hpp"

namespace facekit {

// Exact Euclidean distance transform of a contour pixel set: zero exactly on
// contour pixels, bilinear-sampleable elsewhere.
struct DistanceTransform {
  int width = 0;
  int height = 0;
  bool empty = true;
  std::vector<double> dist;
  std::vector<std::pair<int, int>> contour;  // the D == 0 pixel set

  double at(int x, int y) const { return dist[static_cast<size_t>(y) * width + x]; }
  double sample_bilinear(double x, double y) const;
  Vec2 gradient_central(int x, int y) const;
  Vec2 gradient_bilinear(double x, double y) const;
};

DistanceTransform distance_transform_from_pixels(int width, int height,
                                                 const std::vector<std::pair<int, int>>& pixels);

// Image-side lip contours extracted from a label image {0,1,2}. Outer
// boundary: lip pixels adjacent to exterior background (background reachable
// from the image border, which includes skin since skin is unlabeled). Inner
// boundary: lip pixels adjacent to the other lip or to enclosed background
// (the mouth interior).
struct LipLabelContours {
  // [lip 0=upper,1=lower][side 0=outer,1=inner]
  std::vector<std::pair<int, int>> pixels[2][2];
};

LipLabelContours extract_label_contours(const LabelImage& labels);

// The four distance transforms D_a^b consumed by the segmentation loss.
struct DistanceTransformSet {
  DistanceTransform dt[2][2];
};

DistanceTransformSet build_distance_transform_set(const LabelImage& labels);

}  // namespace facekit
