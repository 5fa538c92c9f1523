#include "engine/pipeline.hpp"

#include "common/errors.hpp"
#include "kernels/kernels.hpp"

namespace facekit {

void forward_frame(const FrameContext& ctx, const ClipParams& clip, int frame_index, FrameForward& out,
                   int threads) {
  const FaceTemplate& face = *ctx.face;
  const DeformationGraph& graph = *ctx.graph;
  const MorphableModel& model = *ctx.model;
  const FrameParams& fp = clip.frames[static_cast<size_t>(frame_index)];

  out.alpha = clip.alpha;
  out.delta = fp.delta;
  out.beta = clip.beta;
  out.gamma = fp.gamma;
  out.rot_angles = fp.rotation;
  out.translation = fp.translation;
  out.rot = rotation_matrix(fp.rotation);
  out.drot = rotation_matrix_derivatives(fp.rotation);

  out.graph_field = graph_deformation(model, clip.alpha, fp.delta);
  out.geometry = face.mean_positions + graph.apply(out.graph_field);
  out.reflectance = assemble_reflectance(face, model, clip.beta);
  out.normals = compute_normals(out.geometry, face.triangles);

  const Eigen::Index n = face.vertex_count;
  out.world_normals.resize(3 * n);
  out.sh.resize(static_cast<size_t>(n));
  out.irradiance.resize(3 * n);
  out.colors.resize(3 * n);
  for (Eigen::Index v = 0; v < n; ++v) {
    const Vec3 nw = out.rot * Vec3(out.normals.unit.segment<3>(3 * v));
    out.world_normals.segment<3>(3 * v) = nw;
    const auto basis = sh_basis(nw);
    out.sh[static_cast<size_t>(v)] = basis;
    for (int ch = 0; ch < 3; ++ch) {
      double irr = 0.0;
      for (int b = 0; b < kShCoeffs; ++b) irr += fp.gamma[ch * kShCoeffs + b] * basis[b];
      out.irradiance[3 * v + ch] = irr;
      out.colors[3 * v + ch] = out.reflectance[3 * v + ch] * irr;
    }
  }

  out.sv = transform_vertices(out.geometry, RigidPose{fp.rotation, fp.translation}, *ctx.camera);
  out.ro = render(out.sv, face.triangles, out.colors, *ctx.camera, threads);
}

void backward_frame(const FrameContext& ctx, const FrameForward& fwd, const FrameBackInputs& back,
                    int frame_index, ClipGrads& out) {
  const FaceTemplate& face = *ctx.face;
  const DeformationGraph& graph = *ctx.graph;
  const MorphableModel& model = *ctx.model;
  const Camera& cam = *ctx.camera;
  const Eigen::Index n = face.vertex_count;
  FrameGrads& fg = out.frames[static_cast<size_t>(frame_index)];

  // Raster + explicit screen-space sinks.
  RenderGrads rg = render_backward(fwd.ro, fwd.sv, face.triangles, fwd.colors, back.d_color);
  for (const auto& [v, d] : back.d_vertex_screen) {
    rg.d_screen.segment<2>(2 * v) += d;
  }
  for (const auto& h : back.d_point_handles) {
    add_point_handle_gradient(fwd.ro, face.triangles, h.tri, h.bary, h.d_pos, rg);
  }

  // Screen/depth -> camera -> world -> (geometry, pose).
  VecX d_vertices = VecX::Zero(3 * n);
  for (Eigen::Index v = 0; v < n; ++v) {
    const Vec2 ds = rg.d_screen.segment<2>(2 * v);
    const double dz = rg.d_cam_z[v];
    if (ds.x() == 0.0 && ds.y() == 0.0 && dz == 0.0) continue;
    if (fwd.sv.valid[static_cast<size_t>(v)] == 0) continue;
    const Vec3 c = fwd.sv.cam.segment<3>(3 * v);
    Vec3 dcam = projection_jacobian(c, cam).transpose() * ds;
    dcam.z() += dz;
    const Vec3 dworld(dcam.x(), -dcam.y(), -dcam.z());
    const Vec3 pos = fwd.geometry.segment<3>(3 * v);
    d_vertices.segment<3>(3 * v) += fwd.rot.transpose() * dworld;
    fg.trans += dworld;
    for (int k = 0; k < 3; ++k) fg.rot[k] += dworld.dot(fwd.drot[k] * pos);
  }

  // Shading.
  VecX d_reflectance = VecX::Zero(3 * n);
  VecX d_unit = VecX::Zero(3 * n);
  for (Eigen::Index v = 0; v < n; ++v) {
    const double* dc = rg.d_colors.data() + 3 * v;
    if (dc[0] == 0.0 && dc[1] == 0.0 && dc[2] == 0.0) continue;
    const auto& basis = fwd.sh[static_cast<size_t>(v)];
    std::array<double, kShCoeffs> dh{};
    for (int ch = 0; ch < 3; ++ch) {
      const double r = fwd.reflectance[3 * v + ch];
      d_reflectance[3 * v + ch] += dc[ch] * fwd.irradiance[3 * v + ch];
      for (int b = 0; b < kShCoeffs; ++b) {
        fg.gamma[ch * kShCoeffs + b] += dc[ch] * r * basis[b];
        dh[static_cast<size_t>(b)] += dc[ch] * r * fwd.gamma[ch * kShCoeffs + b];
      }
    }
    const Vec3 nw = fwd.world_normals.segment<3>(3 * v);
    const auto shg = sh_basis_gradient(nw);
    Vec3 dnw = Vec3::Zero();
    for (int b = 0; b < kShCoeffs; ++b) dnw += dh[static_cast<size_t>(b)] * Vec3(shg.row(b));
    const Vec3 m = fwd.normals.unit.segment<3>(3 * v);
    d_unit.segment<3>(3 * v) += fwd.rot.transpose() * dnw;
    for (int k = 0; k < 3; ++k) fg.rot[k] += dnw.dot(fwd.drot[k] * m);
  }
  normals_backward(fwd.geometry, face.triangles, fwd.normals, d_unit, d_vertices);

  // Geometry chain: dL/dfield = U^T dV + direct graph-field sinks.
  VecX d_field = graph.apply_transpose(d_vertices);
  if (back.d_graph_field.size() == d_field.size()) d_field += back.d_graph_field;

  kernels::gemv_cols_t(model.M_gid.data(), model.M_gid.rows(), model.M_gid.cols(), d_field.data(),
                       out.alpha.data());
  kernels::gemv_cols_t(model.M_gexp.data(), model.M_gexp.rows(), model.M_gexp.cols(), d_field.data(),
                       fg.delta.data());
  if (back.d_delta_direct.size() == fg.delta.size()) fg.delta += back.d_delta_direct;

  kernels::gemv_cols_t(model.M_R.data(), model.M_R.rows(), model.M_R.cols(), d_reflectance.data(),
                       out.beta.data());

  if (out.has_model_grads) {
    kernels::outer_acc(out.M_gid.data(), out.M_gid.rows(), out.M_gid.cols(), d_field.data(),
                       fwd.alpha.data());
    kernels::outer_acc(out.M_gexp.data(), out.M_gexp.rows(), out.M_gexp.cols(), d_field.data(),
                       fwd.delta.data());
    kernels::outer_acc(out.M_R.data(), out.M_R.rows(), out.M_R.cols(), d_reflectance.data(),
                       fwd.beta.data());
  }
}

}  // namespace facekit
