#pragma once

#include <memory>
#include <vector>

#include "core/types.hpp"

namespace facekit {

// Pluggable differentiable feature map image -> list of flattened feature
// vectors, one per level. The cosine loss on top lives in losses.cpp.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual int level_count() const = 0;
  virtual std::vector<VecX> extract(const Image& img) const = 0;
  // d(loss)/d(img) given per-level feature gradients; empty vectors mean the
  // level was skipped.
  virtual Image backward(const Image& img, const std::vector<VecX>& d_features) const = 0;
};

// Built-in default: Gaussian pyramid levels, each concatenated with its x/y
// central-difference gradients.
class PyramidFeatureExtractor final : public FeatureExtractor {
 public:
  explicit PyramidFeatureExtractor(int levels = 4) : levels_(levels) {}
  int level_count() const override { return levels_; }
  std::vector<VecX> extract(const Image& img) const override;
  Image backward(const Image& img, const std::vector<VecX>& d_features) const override;

 private:
  int levels_;
};

std::shared_ptr<const FeatureExtractor> default_feature_extractor();

}  // namespace facekit
