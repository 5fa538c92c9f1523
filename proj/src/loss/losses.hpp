#pragma once

#include <memory>

#include "engine/pipeline.hpp"
#include "loss/observations.hpp"
#include "loss/perceptual.hpp"
#include "raster/contours.hpp"

namespace facekit {

struct LossWeights {
  double seg = 0.1;
  double pho = 1.0;
  double per = 0.05;
  double smo = 10.0;
  double dis = 1.0;
  double tau = 10.0;                // px; segmentation outlier gate (both terms)
  double mean_mesh_landmark = 1.0;  // pose-regularizing landmark term weight
};

struct LossEnable {
  bool land = true;
  bool seg = true;
  bool pho = true;
  bool per = true;
  bool smo = true;
  bool dis = true;
  bool land_mean = false;
};

struct LossTerms {
  double land = 0, seg = 0, pho = 0, per = 0, smo = 0, dis = 0, land_mean = 0;
};

struct LossDiagnostics {
  int landmarks_skipped = 0;          // landmark vertex behind camera
  int contour_pairs_skipped = 0;      // empty contour on either side
  int perceptual_levels_skipped = 0;  // zero-norm feature vector
};

struct ClipLossReport {
  LossTerms terms;
  double total = 0.0;
  ClipGrads grads;
  LossDiagnostics diag;
  // Discrete-choice fingerprint (coverage, tri ids, contour sizes, landmark
  // selection); finite-difference checks exclude coordinates that flip it.
  std::uint64_t vis_signature = 0;
};

struct LossOptions {
  LossWeights weights;
  LossEnable enable;
  bool model_grads = true;
  int threads = 1;
  std::shared_ptr<const FeatureExtractor> extractor;  // null = built-in pyramid
};

// Per-frame landmark vertex resolution: static landmarks use their annotated
// vertex; contour landmarks pick the candidate whose projection is extremal
// along the outward direction from the landmark centroid.
std::vector<int> select_landmark_vertices(const FaceTemplate& t, const ScreenVertices& sv);

ClipLossReport evaluate_clip(const FrameContext& ctx, const ClipParams& params,
                             const ClipObservations& obs, const LossOptions& opt);

// Landmark loss of the undeformed template under each frame's pose; gradients
// with respect to pose only.
struct MeanMeshGrads {
  double value = 0.0;
  std::vector<Vec3> d_rot;
  std::vector<Vec3> d_trans;
};

MeanMeshGrads mean_mesh_landmark_loss(const FaceTemplate& t, const Camera& cam, const ClipParams& params,
                                      const ClipObservations& obs);

}  // namespace facekit
