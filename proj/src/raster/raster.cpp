#include "raster/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/errors.hpp"
#include "common/parallel.hpp"
#include "kernels/kernels.hpp"

namespace facekit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Top-left fill rule for the canonical (positive-area) orientation in y-down
// screen coordinates: horizontal edges with interior below, and left edges.
bool edge_topleft(double dx, double dy) { return (dy == 0.0 && dx > 0.0) || dy < 0.0; }

struct TriSetup {
  std::array<int, 3> idx;    // canonical vertex order (positive area)
  std::array<Vec2, 3> s;     // screen positions, canonical order
  std::array<double, 3> z;   // camera depths, canonical order
  double area2 = 0.0;        // positive
  bool swapped = false;
  int x0 = 0, x1 = -1, y0 = 0, y1 = -1;  // pixel bbox
};

bool setup_triangle(const ScreenVertices& sv, const std::array<int, 3>& tri, int width, int height,
                    TriSetup& out) {
  for (int i : tri) {
    if (sv.valid[i] == 0) return false;
  }
  std::array<int, 3> idx = tri;
  Vec2 s0 = sv.screen_of(idx[0]);
  Vec2 s1 = sv.screen_of(idx[1]);
  Vec2 s2 = sv.screen_of(idx[2]);
  double area2 = (s1.x() - s0.x()) * (s2.y() - s0.y()) - (s1.y() - s0.y()) * (s2.x() - s0.x());
  if (area2 == 0.0) return false;
  bool swapped = false;
  if (area2 < 0.0) {
    std::swap(idx[1], idx[2]);
    std::swap(s1, s2);
    area2 = (s1.x() - s0.x()) * (s2.y() - s0.y()) - (s1.y() - s0.y()) * (s2.x() - s0.x());
    swapped = true;
  }
  out.idx = idx;
  out.s = {s0, s1, s2};
  out.z = {sv.cam[3 * idx[0] + 2], sv.cam[3 * idx[1] + 2], sv.cam[3 * idx[2] + 2]};
  out.area2 = area2;
  out.swapped = swapped;

  const double minx = std::min({s0.x(), s1.x(), s2.x()});
  const double maxx = std::max({s0.x(), s1.x(), s2.x()});
  const double miny = std::min({s0.y(), s1.y(), s2.y()});
  const double maxy = std::max({s0.y(), s1.y(), s2.y()});
  out.x0 = std::max(0, static_cast<int>(std::ceil(minx - 0.5)));
  out.x1 = std::min(width - 1, static_cast<int>(std::floor(maxx - 0.5)));
  out.y0 = std::max(0, static_cast<int>(std::ceil(miny - 0.5)));
  out.y1 = std::min(height - 1, static_cast<int>(std::floor(maxy - 0.5)));
  return out.x0 <= out.x1 && out.y0 <= out.y1;
}

}  // namespace

ScreenVertices transform_vertices(const VecX& vertices_model, const RigidPose& pose, const Camera& cam) {
  const Eigen::Index n = vertices_model.size() / 3;
  ScreenVertices sv;
  sv.cam.resize(3 * n);
  sv.screen.setZero(2 * n);
  sv.valid.assign(static_cast<size_t>(n), 0);
  const Mat3 rot = rotation_matrix(pose.rotation);
  for (Eigen::Index v = 0; v < n; ++v) {
    const Vec3 world = rot * Vec3(vertices_model.segment<3>(3 * v)) + pose.translation;
    const Vec3 c = world_to_camera(world);
    sv.cam.segment<3>(3 * v) = c;
    if (c.z() > kCameraNear) {
      sv.valid[static_cast<size_t>(v)] = 1;
      sv.screen.segment<2>(2 * v) = cam.principal + cam.focal * Vec2(c.x() / c.z(), c.y() / c.z());
    }
  }
  return sv;
}

RenderOutput render(const ScreenVertices& sv, const std::vector<std::array<int, 3>>& triangles,
                    const VecX& vertex_colors, const Camera& cam, int threads) {
  require(vertex_colors.size() == sv.cam.size(), "vertex color buffer size mismatch");
  const int W = cam.width, H = cam.height;
  RenderOutput ro;
  ro.width = W;
  ro.height = H;
  ro.color = Image(W, H, 3);
  ro.raw_color.assign(static_cast<size_t>(W) * H * 3, 0.0);
  ro.mask.assign(static_cast<size_t>(W) * H, 0);
  ro.tri_id.assign(static_cast<size_t>(W) * H, kNoTriangle);
  ro.bary.assign(static_cast<size_t>(W) * H * 3, 0.0);
  ro.depth.assign(static_cast<size_t>(W) * H, kInf);

  std::vector<TriSetup> setups;
  std::vector<int> setup_tri;
  setups.reserve(triangles.size());
  for (size_t t = 0; t < triangles.size(); ++t) {
    TriSetup ts;
    if (setup_triangle(sv, triangles[t], W, H, ts)) {
      setups.push_back(ts);
      setup_tri.push_back(static_cast<int>(t));
    }
  }

  // Row bands: every pixel is owned by exactly one band, so the result is
  // independent of the thread count.
  std::vector<std::uint8_t> cover_buf(static_cast<size_t>(W));
  auto rasterize_rows = [&](int yband0, int yband1, std::vector<std::uint8_t>& cover) {
    for (size_t si = 0; si < setups.size(); ++si) {
      const TriSetup& ts = setups[si];
      const int tri = setup_tri[si];
      const int ry0 = std::max(ts.y0, yband0);
      const int ry1 = std::min(ts.y1, yband1 - 1);
      for (int y = ry0; y <= ry1; ++y) {
        const double qy = y + 0.5;
        kernels::EdgeSpan edges[3];
        for (int e = 0; e < 3; ++e) {
          const Vec2& a = ts.s[(e + 1) % 3];
          const Vec2& b = ts.s[(e + 2) % 3];
          const double dx = b.x() - a.x();
          const double dy = b.y() - a.y();
          edges[e] = {dx * (qy - a.y()), dy, a.x(), edge_topleft(dx, dy)};
        }
        const double qx0 = ts.x0 + 0.5;
        const size_t span = static_cast<size_t>(ts.x1 - ts.x0 + 1);
        kernels::coverage_span(edges, qx0, span, cover.data());
        for (size_t k = 0; k < span; ++k) {
          if (cover[k] == 0) continue;
          const int x = ts.x0 + static_cast<int>(k);
          const double qx = qx0 + static_cast<double>(k);
          double e_val[3];
          for (int e = 0; e < 3; ++e) {
            e_val[e] = edges[e].t - edges[e].d * (qx - edges[e].ax);
          }
          double u[3], usum = 0.0;
          for (int i = 0; i < 3; ++i) {
            u[i] = (e_val[i] / ts.area2) / ts.z[i];
            usum += u[i];
          }
          const double depth = 1.0 / usum;
          const size_t p = ro.pixel(x, y);
          if (depth < ro.depth[p]) {
            ro.depth[p] = depth;
            ro.tri_id[p] = tri;
            ro.mask[p] = 1;
            double b[3] = {u[0] / usum, u[1] / usum, u[2] / usum};
            if (ts.swapped) std::swap(b[1], b[2]);
            ro.bary[3 * p] = b[0];
            ro.bary[3 * p + 1] = b[1];
            ro.bary[3 * p + 2] = b[2];
          }
        }
      }
    }
  };

  if (threads <= 1) {
    rasterize_rows(0, H, cover_buf);
  } else {
    parallel_for(static_cast<size_t>(H), threads, [&](size_t lo, size_t hi) {
      std::vector<std::uint8_t> local(static_cast<size_t>(W));
      rasterize_rows(static_cast<int>(lo), static_cast<int>(hi), local);
    });
  }

  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const size_t p = ro.pixel(x, y);
      if (ro.mask[p] == 0) continue;
      const auto& tri = triangles[static_cast<size_t>(ro.tri_id[p])];
      for (int ch = 0; ch < 3; ++ch) {
        double c = 0.0;
        for (int i = 0; i < 3; ++i) c += ro.bary[3 * p + i] * vertex_colors[3 * tri[i] + ch];
        ro.raw_color[3 * p + ch] = c;
        ro.color.data[3 * p + ch] = std::clamp(c, 0.0, 1.0);
      }
    }
  }
  return ro;
}

RenderGrads render_backward(const RenderOutput& ro, const ScreenVertices& sv,
                            const std::vector<std::array<int, 3>>& triangles, const VecX& vertex_colors,
                            const Image& d_color) {
  require(d_color.width == ro.width && d_color.height == ro.height && d_color.channels == 3,
          "render_backward: gradient image shape mismatch");
  const Eigen::Index n = sv.cam.size() / 3;
  RenderGrads g;
  g.d_colors = VecX::Zero(3 * n);
  g.d_screen = VecX::Zero(2 * n);
  g.d_cam_z = VecX::Zero(n);

  for (int y = 0; y < ro.height; ++y) {
    for (int x = 0; x < ro.width; ++x) {
      const size_t p = ro.pixel(x, y);
      if (ro.mask[p] == 0) continue;
      const auto& tri = triangles[static_cast<size_t>(ro.tri_id[p])];

      // Clamp gate: channels saturated in the forward pass pass no gradient.
      Vec3 gpix;
      bool any = false;
      for (int ch = 0; ch < 3; ++ch) {
        const double raw = ro.raw_color[3 * p + ch];
        const double gv = d_color.at(x, y, ch);
        gpix[ch] = (raw > 0.0 && raw < 1.0) ? gv : 0.0;
        any = any || gpix[ch] != 0.0;
      }
      if (!any) continue;

      const double b[3] = {ro.bary[3 * p], ro.bary[3 * p + 1], ro.bary[3 * p + 2]};
      double db[3];
      for (int i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (int ch = 0; ch < 3; ++ch) {
          g.d_colors[3 * tri[i] + ch] += b[i] * gpix[ch];
          acc += gpix[ch] * vertex_colors[3 * tri[i] + ch];
        }
        db[i] = acc;
      }

      // b = u/W with u_i = a_i/z_i, W = sum u. Recover the affine bary a from
      // the stored perspective-correct b.
      const double z[3] = {sv.cam[3 * tri[0] + 2], sv.cam[3 * tri[1] + 2], sv.cam[3 * tri[2] + 2]};
      const double bz = b[0] * z[0] + b[1] * z[1] + b[2] * z[2];
      const double a[3] = {b[0] * z[0] / bz, b[1] * z[1] / bz, b[2] * z[2] / bz};
      const double W = 1.0 / ro.depth[p];

      const double db_dot_b = db[0] * b[0] + db[1] * b[1] + db[2] * b[2];
      double du[3], da[3];
      for (int i = 0; i < 3; ++i) {
        du[i] = (db[i] - db_dot_b) / W;
        da[i] = du[i] / z[i];
        g.d_cam_z[tri[i]] += -du[i] * (b[i] * W) / z[i];
      }

      const Vec2 s0 = sv.screen_of(tri[0]);
      const Vec2 s1 = sv.screen_of(tri[1]);
      const Vec2 s2 = sv.screen_of(tri[2]);
      const Vec2 s[3] = {s0, s1, s2};
      const double area2 = (s1.x() - s0.x()) * (s2.y() - s0.y()) - (s1.y() - s0.y()) * (s2.x() - s0.x());
      const double qx = x + 0.5, qy = y + 0.5;

      double dE[3], darea2 = 0.0;
      for (int i = 0; i < 3; ++i) {
        dE[i] = da[i] / area2;
        darea2 += -da[i] * a[i] / area2;
      }
      for (int i = 0; i < 3; ++i) {
        const int j1 = (i + 1) % 3, j2 = (i + 2) % 3;
        // dE_i/ds_{i+1}, dE_i/ds_{i+2}
        g.d_screen[2 * tri[j1]] += dE[i] * (s[j2].y() - qy);
        g.d_screen[2 * tri[j1] + 1] += dE[i] * (qx - s[j2].x());
        g.d_screen[2 * tri[j2]] += dE[i] * (qy - s[j1].y());
        g.d_screen[2 * tri[j2] + 1] += dE[i] * (s[j1].x() - qx);
        // darea2/ds_i
        g.d_screen[2 * tri[i]] += darea2 * (s[j1].y() - s[j2].y());
        g.d_screen[2 * tri[i] + 1] += darea2 * (s[j2].x() - s[j1].x());
      }
    }
  }
  return g;
}

void add_point_handle_gradient(const RenderOutput& ro, const std::vector<std::array<int, 3>>& triangles,
                               int tri, const Vec3& bary, const Vec2& d_pos, RenderGrads& grads) {
  (void)ro;
  const auto& t = triangles[static_cast<size_t>(tri)];
  for (int i = 0; i < 3; ++i) {
    grads.d_screen[2 * t[i]] += bary[i] * d_pos.x();
    grads.d_screen[2 * t[i] + 1] += bary[i] * d_pos.y();
  }
}

}  // namespace facekit
