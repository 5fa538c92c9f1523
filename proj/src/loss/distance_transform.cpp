#include "loss/distance_transform.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "common/errors.hpp"

namespace facekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Felzenszwalb-Huttenlocher 1D squared-distance transform (lower envelope of
// parabolas). Sites with f == inf carry no parabola.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  d.resize(f.size());
  v.resize(f.size());
  z.resize(f.size() + 1);
  int first = -1;
  for (int i = 0; i < n; ++i) {
    if (f[static_cast<size_t>(i)] < kInf) {
      first = i;
      break;
    }
  }
  if (first < 0) {
    std::fill(d.begin(), d.end(), kInf);
    return;
  }
  int k = 0;
  v[0] = first;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = first + 1; q < n; ++q) {
    if (f[static_cast<size_t>(q)] == kInf) continue;
    double s = 0.0;
    while (true) {
      const int p = v[static_cast<size_t>(k)];
      s = ((f[static_cast<size_t>(q)] + q * q) - (f[static_cast<size_t>(p)] + p * p)) /
          (2.0 * q - 2.0 * p);
      if (s <= z[static_cast<size_t>(k)]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[static_cast<size_t>(k)] = q;
    z[static_cast<size_t>(k)] = s;
    z[static_cast<size_t>(k + 1)] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<size_t>(k + 1)] < q) ++k;
    const int p = v[static_cast<size_t>(k)];
    const double dq = q - p;
    d[static_cast<size_t>(q)] = dq * dq + f[static_cast<size_t>(p)];
  }
}

}  // namespace

double DistanceTransform::sample_bilinear(double x, double y) const {
  const double cx = std::clamp(x - 0.5, 0.0, static_cast<double>(width - 1));
  const double cy = std::clamp(y - 0.5, 0.0, static_cast<double>(height - 1));
  const int x0 = std::min(static_cast<int>(cx), width - 2 >= 0 ? width - 2 : 0);
  const int y0 = std::min(static_cast<int>(cy), height - 2 >= 0 ? height - 2 : 0);
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const double fx = cx - x0;
  const double fy = cy - y0;
  const double d00 = at(x0, y0), d10 = at(x1, y0), d01 = at(x0, y1), d11 = at(x1, y1);
  return (1 - fx) * (1 - fy) * d00 + fx * (1 - fy) * d10 + (1 - fx) * fy * d01 + fx * fy * d11;
}

Vec2 DistanceTransform::gradient_central(int x, int y) const {
  const int xm = std::max(0, x - 1), xp = std::min(width - 1, x + 1);
  const int ym = std::max(0, y - 1), yp = std::min(height - 1, y + 1);
  const double gx = (at(xp, y) - at(xm, y)) / static_cast<double>(xp - xm == 0 ? 1 : xp - xm);
  const double gy = (at(x, yp) - at(x, ym)) / static_cast<double>(yp - ym == 0 ? 1 : yp - ym);
  return {gx, gy};
}

Vec2 DistanceTransform::gradient_bilinear(double x, double y) const {
  const double cx = std::clamp(x - 0.5, 0.0, static_cast<double>(width - 1));
  const double cy = std::clamp(y - 0.5, 0.0, static_cast<double>(height - 1));
  const int x0 = std::min(static_cast<int>(cx), width - 2 >= 0 ? width - 2 : 0);
  const int y0 = std::min(static_cast<int>(cy), height - 2 >= 0 ? height - 2 : 0);
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const double fx = cx - x0;
  const double fy = cy - y0;
  const double d00 = at(x0, y0), d10 = at(x1, y0), d01 = at(x0, y1), d11 = at(x1, y1);
  const double gx = (1 - fy) * (d10 - d00) + fy * (d11 - d01);
  const double gy = (1 - fx) * (d01 - d00) + fx * (d11 - d10);
  return {gx, gy};
}

DistanceTransform distance_transform_from_pixels(int width, int height,
                                                 const std::vector<std::pair<int, int>>& pixels) {
  DistanceTransform dt;
  dt.width = width;
  dt.height = height;
  dt.contour = pixels;
  dt.empty = pixels.empty();
  dt.dist.assign(static_cast<size_t>(width) * height, kInf);
  if (dt.empty) return dt;

  std::vector<double> grid(static_cast<size_t>(width) * height, kInf);
  for (const auto& [x, y] : pixels) {
    require(x >= 0 && x < width && y >= 0 && y < height, "contour pixel out of bounds");
    grid[static_cast<size_t>(y) * width + x] = 0.0;
  }

  std::vector<double> col(height), dcol, row(width), drow;
  std::vector<int> v;
  std::vector<double> z;
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) col[static_cast<size_t>(y)] = grid[static_cast<size_t>(y) * width + x];
    edt_1d(col, dcol, v, z);
    for (int y = 0; y < height; ++y) grid[static_cast<size_t>(y) * width + x] = dcol[static_cast<size_t>(y)];
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) row[static_cast<size_t>(x)] = grid[static_cast<size_t>(y) * width + x];
    edt_1d(row, drow, v, z);
    for (int x = 0; x < width; ++x) {
      dt.dist[static_cast<size_t>(y) * width + x] = std::sqrt(drow[static_cast<size_t>(x)]);
    }
  }
  return dt;
}

LipLabelContours extract_label_contours(const LabelImage& labels) {
  const int W = labels.width, H = labels.height;
  // Exterior background: background pixels 4-connected to the border.
  std::vector<std::uint8_t> exterior(static_cast<size_t>(W) * H, 0);
  std::deque<std::pair<int, int>> queue;
  auto push_if_bg = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= W || y >= H) return;
    const size_t i = static_cast<size_t>(y) * W + x;
    if (exterior[i] != 0 || labels.at(x, y) != kLipLabelBackground) return;
    exterior[i] = 1;
    queue.emplace_back(x, y);
  };
  for (int x = 0; x < W; ++x) {
    push_if_bg(x, 0);
    push_if_bg(x, H - 1);
  }
  for (int y = 0; y < H; ++y) {
    push_if_bg(0, y);
    push_if_bg(W - 1, y);
  }
  while (!queue.empty()) {
    const auto [x, y] = queue.front();
    queue.pop_front();
    push_if_bg(x - 1, y);
    push_if_bg(x + 1, y);
    push_if_bg(x, y - 1);
    push_if_bg(x, y + 1);
  }

  auto kind = [&](int x, int y) -> int {
    // 0 exterior-ish, 1 upper, 2 lower, 3 enclosed background
    if (x < 0 || y < 0 || x >= W || y >= H) return 0;
    const std::uint8_t l = labels.at(x, y);
    if (l == kLipLabelUpper) return 1;
    if (l == kLipLabelLower) return 2;
    return exterior[static_cast<size_t>(y) * W + x] != 0 ? 0 : 3;
  };

  LipLabelContours out;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const int me = kind(x, y);
      if (me != 1 && me != 2) continue;
      const int lip = me - 1;
      const int other = me == 1 ? 2 : 1;
      const int nb[4] = {kind(x - 1, y), kind(x + 1, y), kind(x, y - 1), kind(x, y + 1)};
      bool outer = false, inner = false;
      for (int k : nb) {
        outer = outer || k == 0;
        inner = inner || k == other || k == 3;
      }
      if (outer) out.pixels[lip][0].emplace_back(x, y);
      if (inner) out.pixels[lip][1].emplace_back(x, y);
    }
  }
  return out;
}

DistanceTransformSet build_distance_transform_set(const LabelImage& labels) {
  const LipLabelContours c = extract_label_contours(labels);
  DistanceTransformSet set;
  for (int lip = 0; lip < 2; ++lip) {
    for (int side = 0; side < 2; ++side) {
      set.dt[lip][side] = distance_transform_from_pixels(labels.width, labels.height, c.pixels[lip][side]);
    }
  }
  return set;
}

}  // namespace facekit
