#include "loss/perceptual.hpp"

#include <algorithm>

#include "common/errors.hpp"

namespace facekit {

namespace {

constexpr double kBlur[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

Image blur_separable(const Image& in) {
  Image tmp(in.width, in.height, in.channels);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      for (int c = 0; c < in.channels; ++c) {
        double acc = 0.0;
        for (int k = 0; k < 5; ++k) acc += kBlur[k] * in.at(clampi(x + k - 2, 0, in.width - 1), y, c);
        tmp.at(x, y, c) = acc;
      }
    }
  }
  Image out(in.width, in.height, in.channels);
  for (int y = 0; y < in.height; ++y) {
    for (int x = 0; x < in.width; ++x) {
      for (int c = 0; c < in.channels; ++c) {
        double acc = 0.0;
        for (int k = 0; k < 5; ++k) acc += kBlur[k] * tmp.at(x, clampi(y + k - 2, 0, in.height - 1), c);
        out.at(x, y, c) = acc;
      }
    }
  }
  return out;
}

// Exact adjoint of blur_separable, including the clamped borders.
Image blur_separable_transpose(const Image& dout) {
  Image dtmp(dout.width, dout.height, dout.channels);
  for (int y = 0; y < dout.height; ++y) {
    for (int x = 0; x < dout.width; ++x) {
      for (int c = 0; c < dout.channels; ++c) {
        const double g = dout.at(x, y, c);
        if (g == 0.0) continue;
        for (int k = 0; k < 5; ++k) dtmp.at(x, clampi(y + k - 2, 0, dout.height - 1), c) += kBlur[k] * g;
      }
    }
  }
  Image din(dout.width, dout.height, dout.channels);
  for (int y = 0; y < dout.height; ++y) {
    for (int x = 0; x < dout.width; ++x) {
      for (int c = 0; c < dout.channels; ++c) {
        const double g = dtmp.at(x, y, c);
        if (g == 0.0) continue;
        for (int k = 0; k < 5; ++k) din.at(clampi(x + k - 2, 0, dout.width - 1), y, c) += kBlur[k] * g;
      }
    }
  }
  return din;
}

Image downsample2(const Image& in) {
  Image out((in.width + 1) / 2, (in.height + 1) / 2, in.channels);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      for (int c = 0; c < in.channels; ++c) out.at(x, y, c) = in.at(2 * x, 2 * y, c);
    }
  }
  return out;
}

Image downsample2_transpose(const Image& dout, int parent_w, int parent_h) {
  Image din(parent_w, parent_h, dout.channels);
  for (int y = 0; y < dout.height; ++y) {
    for (int x = 0; x < dout.width; ++x) {
      for (int c = 0; c < dout.channels; ++c) din.at(2 * x, 2 * y, c) = dout.at(x, y, c);
    }
  }
  return din;
}

// Features of one level: [pixels, d/dx, d/dy] flattened.
VecX level_features(const Image& p) {
  const size_t n = p.size();
  VecX f(3 * n);
  for (size_t i = 0; i < n; ++i) f[static_cast<Eigen::Index>(i)] = p.data[i];
  size_t off = n;
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      for (int c = 0; c < p.channels; ++c) {
        const double gx = (p.at(clampi(x + 1, 0, p.width - 1), y, c) - p.at(clampi(x - 1, 0, p.width - 1), y, c)) / 2.0;
        f[static_cast<Eigen::Index>(off++)] = gx;
      }
    }
  }
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      for (int c = 0; c < p.channels; ++c) {
        const double gy = (p.at(x, clampi(y + 1, 0, p.height - 1), c) - p.at(x, clampi(y - 1, 0, p.height - 1), c)) / 2.0;
        f[static_cast<Eigen::Index>(off++)] = gy;
      }
    }
  }
  return f;
}

Image level_features_transpose(const Image& p, const VecX& df) {
  Image dp(p.width, p.height, p.channels);
  const size_t n = p.size();
  require(static_cast<size_t>(df.size()) == 3 * n, "feature gradient size mismatch");
  for (size_t i = 0; i < n; ++i) dp.data[i] += df[static_cast<Eigen::Index>(i)];
  size_t off = n;
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      for (int c = 0; c < p.channels; ++c) {
        const double g = df[static_cast<Eigen::Index>(off++)] / 2.0;
        if (g == 0.0) continue;
        dp.at(clampi(x + 1, 0, p.width - 1), y, c) += g;
        dp.at(clampi(x - 1, 0, p.width - 1), y, c) -= g;
      }
    }
  }
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      for (int c = 0; c < p.channels; ++c) {
        const double g = df[static_cast<Eigen::Index>(off++)] / 2.0;
        if (g == 0.0) continue;
        dp.at(x, clampi(y + 1, 0, p.height - 1), c) += g;
        dp.at(x, clampi(y - 1, 0, p.height - 1), c) -= g;
      }
    }
  }
  return dp;
}

std::vector<Image> build_pyramid(const Image& img, int levels) {
  std::vector<Image> pyr;
  pyr.push_back(img);
  for (int l = 1; l < levels; ++l) pyr.push_back(downsample2(blur_separable(pyr.back())));
  return pyr;
}

}  // namespace

std::vector<VecX> PyramidFeatureExtractor::extract(const Image& img) const {
  const auto pyr = build_pyramid(img, levels_);
  std::vector<VecX> out;
  out.reserve(pyr.size());
  for (const auto& p : pyr) out.push_back(level_features(p));
  return out;
}

Image PyramidFeatureExtractor::backward(const Image& img, const std::vector<VecX>& d_features) const {
  require(static_cast<int>(d_features.size()) == levels_, "level gradient count mismatch");
  const auto pyr = build_pyramid(img, levels_);
  std::vector<Image> dp(pyr.size());
  for (int l = 0; l < levels_; ++l) {
    if (d_features[static_cast<size_t>(l)].size() == 0) {
      dp[static_cast<size_t>(l)] = Image(pyr[static_cast<size_t>(l)].width, pyr[static_cast<size_t>(l)].height, img.channels);
    } else {
      dp[static_cast<size_t>(l)] = level_features_transpose(pyr[static_cast<size_t>(l)], d_features[static_cast<size_t>(l)]);
    }
  }
  for (int l = levels_ - 1; l >= 1; --l) {
    const Image up = downsample2_transpose(dp[static_cast<size_t>(l)], pyr[static_cast<size_t>(l - 1)].width,
                                           pyr[static_cast<size_t>(l - 1)].height);
    const Image db = blur_separable_transpose(up);
    for (size_t i = 0; i < db.data.size(); ++i) dp[static_cast<size_t>(l - 1)].data[i] += db.data[i];
  }
  return dp[0];
}

std::shared_ptr<const FeatureExtractor> default_feature_extractor() {
  static const auto instance = std::make_shared<const PyramidFeatureExtractor>(4);
  return instance;
}

}  // namespace facekit
