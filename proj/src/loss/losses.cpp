#include "loss/losses.hpp"

#include <cmath>

#include "common/errors.hpp"
#include "common/parallel.hpp"
#include "kernels/kernels.hpp"

namespace facekit {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, size_t bytes) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  for (size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct FrameEval {
  LossTerms terms;
  LossDiagnostics diag;
  std::uint64_t signature = 0xcbf29ce484222325ULL;
};

void landmark_term(const FaceTemplate& face, const FrameForward& fwd, const FrameObservation& obs,
                   FrameBackInputs& back, FrameEval& ev) {
  const auto resolved = select_landmark_vertices(face, fwd.sv);
  ev.signature = fnv1a(ev.signature, resolved.data(), resolved.size() * sizeof(int));
  for (int k = 0; k < kLandmarkCount; ++k) {
    const auto& lm = obs.landmarks[static_cast<size_t>(k)];
    if (!lm.valid) continue;
    const int v = resolved[static_cast<size_t>(k)];
    if (fwd.sv.valid[static_cast<size_t>(v)] == 0) {
      ++ev.diag.landmarks_skipped;
      continue;
    }
    const Vec2 p = fwd.sv.screen_of(v);
    const Vec2 r = p - lm.pos;
    ev.terms.land += r.squaredNorm();
    back.d_vertex_screen.emplace_back(v, 2.0 * r);
  }
}

void segmentation_term(const FaceTemplate& face, const FrameForward& fwd, const FrameObservation& obs,
                       const std::vector<std::uint8_t>& tri_classes, const LossWeights& w,
                       FrameBackInputs& back, FrameEval& ev) {
  const LipContours mesh = extract_mesh_lip_contours(fwd.ro, face, fwd.sv, tri_classes);
  const DistanceTransformSet& dts = obs.dts();
  const double tau = w.tau;
  for (int lip = 0; lip < 2; ++lip) {
    for (int side = 0; side < 2; ++side) {
      const auto& elems = mesh.get(lip, side);
      const DistanceTransform& dt = dts.dt[lip][side];
      ev.signature = fnv1a(ev.signature, &lip, sizeof(lip));
      const size_t esize = elems.size();
      ev.signature = fnv1a(ev.signature, &esize, sizeof(esize));
      if (dt.empty || elems.empty()) {
        ++ev.diag.contour_pairs_skipped;
        continue;
      }
      // Term 1: distance transform sampled at every mesh-contour element.
      for (const auto& e : elems) {
        const double d = dt.sample_bilinear(e.pos.x(), e.pos.y());
        if (d > tau) continue;
        ev.terms.seg += d;
        Vec2 grad;
        if (e.tri >= 0) {
          grad = dt.gradient_central(static_cast<int>(e.pos.x()), static_cast<int>(e.pos.y()));
        } else {
          grad = dt.gradient_bilinear(e.pos.x(), e.pos.y());
        }
        const Vec2 dpos = w.seg * grad;
        if (e.tri >= 0) {
          back.d_point_handles.push_back({e.tri, e.bary, dpos});
        } else {
          back.d_vertex_screen.emplace_back(e.vertex, dpos);
        }
      }
      // Term 2: every image-contour pixel attracts its closest mesh element.
      for (const auto& [cx, cy] : dt.contour) {
        const Vec2 q(cx + 0.5, cy + 0.5);
        double best = std::numeric_limits<double>::infinity();
        const ContourElement* match = nullptr;
        for (const auto& e : elems) {
          const double d2 = (e.pos - q).squaredNorm();
          if (d2 < best) {
            best = d2;
            match = &e;
          }
        }
        if (match == nullptr || std::sqrt(best) > tau) continue;
        ev.terms.seg += best;
        const Vec2 dpos = w.seg * 2.0 * (match->pos - q);
        if (match->tri >= 0) {
          back.d_point_handles.push_back({match->tri, match->bary, dpos});
        } else {
          back.d_vertex_screen.emplace_back(match->vertex, dpos);
        }
      }
    }
  }
}

void photometric_term(const FrameForward& fwd, const FrameObservation& obs, const LossWeights& w,
                      FrameBackInputs& back, FrameEval& ev) {
  const Image& S = fwd.ro.color;
  const Image& F = obs.image;
  require(S.same_shape(F), "photometric: image size mismatch");
  const size_t npix = fwd.ro.mask.size();
  VecX maskd(static_cast<Eigen::Index>(npix * 3));
  for (size_t p = 0; p < npix; ++p) {
    const double m = fwd.ro.mask[p] ? 1.0 : 0.0;
    maskd[static_cast<Eigen::Index>(3 * p)] = m;
    maskd[static_cast<Eigen::Index>(3 * p + 1)] = m;
    maskd[static_cast<Eigen::Index>(3 * p + 2)] = m;
  }
  ev.terms.pho = kernels::ssd_masked(S.data.data(), F.data.data(), maskd.data(), S.data.size());
  VecX g(static_cast<Eigen::Index>(S.data.size()));
  kernels::scaled_diff_masked(S.data.data(), F.data.data(), maskd.data(), 2.0 * w.pho, S.data.size(),
                              g.data());
  for (size_t i = 0; i < S.data.size(); ++i) back.d_color.data[i] += g[static_cast<Eigen::Index>(i)];
}

void perceptual_term(const FrameForward& fwd, const FrameObservation& obs, const FeatureExtractor& ex,
                     const LossWeights& w, FrameBackInputs& back, FrameEval& ev) {
  const auto fS = ex.extract(fwd.ro.color);
  const auto fF = ex.extract(obs.image);
  std::vector<VecX> dfs(fS.size());
  for (size_t l = 0; l < fS.size(); ++l) {
    const VecX& a = fS[l];
    const VecX& b = fF[l];
    const double na = a.norm(), nb = b.norm();
    if (na <= 0.0 || nb <= 0.0) {
      ++ev.diag.perceptual_levels_skipped;
      continue;
    }
    const double cosv = a.dot(b) / (na * nb);
    ev.terms.per += 1.0 - cosv;
    dfs[l] = w.per * (-b / (na * nb) + (cosv / (na * na)) * a);
  }
  const Image dimg = ex.backward(fwd.ro.color, dfs);
  for (size_t i = 0; i < dimg.data.size(); ++i) back.d_color.data[i] += dimg.data[i];
}

void smoothness_term(const DeformationGraph& graph, const FrameForward& fwd, const LossWeights& w,
                     FrameBackInputs& back, FrameEval& ev) {
  const VecX& field = fwd.graph_field;
  for (int g = 0; g < graph.node_count; ++g) {
    const Vec3 dg = field.segment<3>(3 * g);
    for (int n : graph.node_neighbors[static_cast<size_t>(g)]) {
      const Vec3 diff = dg - Vec3(field.segment<3>(3 * n));
      ev.terms.smo += diff.squaredNorm();
      back.d_graph_field.segment<3>(3 * g) += w.smo * 2.0 * diff;
      back.d_graph_field.segment<3>(3 * n) -= w.smo * 2.0 * diff;
    }
  }
}

void disentanglement_term(const FrameForward& fwd, const FrameObservation& obs, const LossWeights& w,
                          FrameBackInputs& back, FrameEval& ev) {
  if (!obs.is_neutral) return;
  ev.terms.dis += fwd.delta.squaredNorm();
  back.d_delta_direct += w.dis * 2.0 * fwd.delta;
}

}  // namespace

std::vector<int> select_landmark_vertices(const FaceTemplate& t, const ScreenVertices& sv) {
  std::vector<int> resolved = t.landmark_vertex_ids;
  if (t.contour_landmarks.empty()) return resolved;

  Vec2 centroid = Vec2::Zero();
  int count = 0;
  for (int v : t.landmark_vertex_ids) {
    if (sv.valid[static_cast<size_t>(v)] == 0) continue;
    centroid += sv.screen_of(v);
    ++count;
  }
  if (count == 0) return resolved;
  centroid /= count;

  for (const auto& c : t.contour_landmarks) {
    const int nominal = t.landmark_vertex_ids[static_cast<size_t>(c.landmark_index)];
    if (sv.valid[static_cast<size_t>(nominal)] == 0) continue;
    Vec2 outward = sv.screen_of(nominal) - centroid;
    const double norm = outward.norm();
    if (norm < 1e-12) continue;
    outward /= norm;
    double best = -std::numeric_limits<double>::infinity();
    int best_v = nominal;
    for (int v : c.candidates) {
      if (sv.valid[static_cast<size_t>(v)] == 0) continue;
      const double score = outward.dot(sv.screen_of(v));
      if (score > best) {
        best = score;
        best_v = v;
      }
    }
    resolved[static_cast<size_t>(c.landmark_index)] = best_v;
  }
  return resolved;
}

MeanMeshGrads mean_mesh_landmark_loss(const FaceTemplate& t, const Camera& cam, const ClipParams& params,
                                      const ClipObservations& obs) {
  MeanMeshGrads out;
  out.d_rot.assign(params.frames.size(), Vec3::Zero());
  out.d_trans.assign(params.frames.size(), Vec3::Zero());
  for (size_t f = 0; f < params.frames.size(); ++f) {
    const FrameParams& fp = params.frames[f];
    const RigidPose pose{fp.rotation, fp.translation};
    const ScreenVertices sv = transform_vertices(t.mean_positions, pose, cam);
    const auto resolved = select_landmark_vertices(t, sv);
    const Mat3 rot = rotation_matrix(fp.rotation);
    const auto drot = rotation_matrix_derivatives(fp.rotation);
    for (int k = 0; k < kLandmarkCount; ++k) {
      const auto& lm = obs.frames[f].landmarks[static_cast<size_t>(k)];
      if (!lm.valid) continue;
      const int v = resolved[static_cast<size_t>(k)];
      if (sv.valid[static_cast<size_t>(v)] == 0) continue;
      const Vec2 r = sv.screen_of(v) - lm.pos;
      out.value += r.squaredNorm();
      const Vec3 c = sv.cam.segment<3>(3 * v);
      const Vec3 dcam = projection_jacobian(c, cam).transpose() * (2.0 * r);
      const Vec3 dworld(dcam.x(), -dcam.y(), -dcam.z());
      const Vec3 pos = t.mean_positions.segment<3>(3 * v);
      (void)rot;
      out.d_trans[f] += dworld;
      for (int a = 0; a < 3; ++a) out.d_rot[f][a] += dworld.dot(drot[static_cast<size_t>(a)] * pos);
    }
  }
  return out;
}

ClipLossReport evaluate_clip(const FrameContext& ctx, const ClipParams& params,
                             const ClipObservations& obs, const LossOptions& opt) {
  const FaceTemplate& face = *ctx.face;
  const DeformationGraph& graph = *ctx.graph;
  const MorphableModel& model = *ctx.model;
  require(params.frame_count() == obs.frame_count(), "params/observations frame count mismatch");
  const int nf = params.frame_count();

  const auto extractor = opt.extractor ? opt.extractor : default_feature_extractor();
  const auto tri_classes = build_triangle_lip_classes(face);

  ClipLossReport report;
  report.grads.init(model.m_i(), model.m_e(), model.m_r(), nf, static_cast<int>(model.M_gid.rows()),
                    static_cast<int>(model.M_R.rows()), opt.model_grads);

  std::vector<FrameEval> evals(static_cast<size_t>(nf));
  std::vector<ClipGrads> partial(static_cast<size_t>(nf));

  auto run_frame = [&](int f) {
    FrameEval& ev = evals[static_cast<size_t>(f)];
    ClipGrads& grads = partial[static_cast<size_t>(f)];
    grads.init(model.m_i(), model.m_e(), model.m_r(), nf, static_cast<int>(model.M_gid.rows()),
               static_cast<int>(model.M_R.rows()), opt.model_grads);
    FrameForward fwd;
    forward_frame(ctx, params, f, fwd, 1);

    FrameBackInputs back;
    back.init(fwd.ro.width, fwd.ro.height, model.m_e(), static_cast<int>(model.M_gid.rows()));

    const FrameObservation& ob = obs.frames[static_cast<size_t>(f)];
    if (opt.enable.land) landmark_term(face, fwd, ob, back, ev);
    if (opt.enable.seg) segmentation_term(face, fwd, ob, tri_classes, opt.weights, back, ev);
    if (opt.enable.pho) photometric_term(fwd, ob, opt.weights, back, ev);
    if (opt.enable.per) perceptual_term(fwd, ob, *extractor, opt.weights, back, ev);
    if (opt.enable.smo) smoothness_term(graph, fwd, opt.weights, back, ev);
    if (opt.enable.dis) disentanglement_term(fwd, ob, opt.weights, back, ev);

    // Coverage fingerprint for finite-difference exclusion.
    ev.signature = fnv1a(ev.signature, fwd.ro.tri_id.data(), fwd.ro.tri_id.size() * sizeof(std::int32_t));

    backward_frame(ctx, fwd, back, f, grads);
  };

  if (opt.threads > 1 && nf > 1) {
    parallel_for(static_cast<size_t>(nf), opt.threads, [&](size_t lo, size_t hi) {
      for (size_t f = lo; f < hi; ++f) run_frame(static_cast<int>(f));
    });
  } else {
    for (int f = 0; f < nf; ++f) run_frame(f);
  }

  // Ordered reduction keeps results independent of the thread count.
  std::uint64_t sig = 0xcbf29ce484222325ULL;
  for (int f = 0; f < nf; ++f) {
    const FrameEval& ev = evals[static_cast<size_t>(f)];
    report.terms.land += ev.terms.land;
    report.terms.seg += ev.terms.seg;
    report.terms.pho += ev.terms.pho;
    report.terms.per += ev.terms.per;
    report.terms.smo += ev.terms.smo;
    report.terms.dis += ev.terms.dis;
    report.diag.landmarks_skipped += ev.diag.landmarks_skipped;
    report.diag.contour_pairs_skipped += ev.diag.contour_pairs_skipped;
    report.diag.perceptual_levels_skipped += ev.diag.perceptual_levels_skipped;
    sig = fnv1a(sig, &ev.signature, sizeof(ev.signature));

    const ClipGrads& g = partial[static_cast<size_t>(f)];
    report.grads.alpha += g.alpha;
    report.grads.beta += g.beta;
    report.grads.frames[static_cast<size_t>(f)] = g.frames[static_cast<size_t>(f)];
    if (opt.model_grads) {
      report.grads.M_gid += g.M_gid;
      report.grads.M_gexp += g.M_gexp;
      report.grads.M_R += g.M_R;
    }
  }
  report.vis_signature = sig;

  if (opt.enable.land_mean) {
    const MeanMeshGrads mm = mean_mesh_landmark_loss(face, *ctx.camera, params, obs);
    report.terms.land_mean = mm.value;
    for (int f = 0; f < nf; ++f) {
      report.grads.frames[static_cast<size_t>(f)].rot += opt.weights.mean_mesh_landmark * mm.d_rot[static_cast<size_t>(f)];
      report.grads.frames[static_cast<size_t>(f)].trans +=
          opt.weights.mean_mesh_landmark * mm.d_trans[static_cast<size_t>(f)];
    }
  }

  const LossWeights& w = opt.weights;
  struct TermPair {
    const char* name;
    double value;
  };
  const TermPair named[] = {{"landmark", report.terms.land}, {"segmentation", report.terms.seg},
                            {"photometric", report.terms.pho}, {"perceptual", report.terms.per},
                            {"smoothness", report.terms.smo}, {"disentanglement", report.terms.dis},
                            {"mean-mesh landmark", report.terms.land_mean}};
  for (const auto& t : named) {
    if (std::isnan(t.value)) throw NumericalError(std::string("loss term produced NaN: ") + t.name);
  }
  report.total = report.terms.land + w.seg * report.terms.seg + w.pho * report.terms.pho +
                 w.per * report.terms.per + w.smo * report.terms.smo + w.dis * report.terms.dis +
                 w.mean_mesh_landmark * report.terms.land_mean;
  return report;
}

}  // namespace facekit
