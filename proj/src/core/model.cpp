#include "core/model.hpp"

#include <fstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "common/errors.hpp"
#include "common/rng.hpp"
#include "kernels/kernels.hpp"

namespace facekit {

using nlohmann::json;

MorphableModel init_model(const FaceTemplate& t, const DeformationGraph& g, int m_i, int m_e, int m_r,
                          uint64_t seed, double relative_std) {
  require(m_i >= 1 && m_e >= 1 && m_r >= 1, "model dims must be positive");
  const double std_dev = relative_std * t.bbox_diagonal();
  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, std_dev);
  MorphableModel m;
  m.M_gid.resize(3 * g.node_count, m_i);
  m.M_gexp.resize(3 * g.node_count, m_e);
  m.M_R.resize(3 * t.vertex_count, m_r);
  for (Eigen::Index j = 0; j < m.M_gid.cols(); ++j)
    for (Eigen::Index i = 0; i < m.M_gid.rows(); ++i) m.M_gid(i, j) = gauss(rng);
  for (Eigen::Index j = 0; j < m.M_gexp.cols(); ++j)
    for (Eigen::Index i = 0; i < m.M_gexp.rows(); ++i) m.M_gexp(i, j) = gauss(rng);
  // Albedo entries live in [0,1] color space; scale independent of geometry.
  std::normal_distribution<double> cgauss(0.0, relative_std);
  for (Eigen::Index j = 0; j < m.M_R.cols(); ++j)
    for (Eigen::Index i = 0; i < m.M_R.rows(); ++i) m.M_R(i, j) = cgauss(rng);
  return m;
}

VecX graph_deformation(const MorphableModel& m, const VecX& alpha, const VecX& delta) {
  require(alpha.size() == m.M_gid.cols(), "alpha dim mismatch");
  require(delta.size() == m.M_gexp.cols(), "delta dim mismatch");
  VecX field = VecX::Zero(m.M_gid.rows());
  kernels::gemv_cols(m.M_gid.data(), m.M_gid.rows(), m.M_gid.cols(), alpha.data(), field.data());
  kernels::gemv_cols(m.M_gexp.data(), m.M_gexp.rows(), m.M_gexp.cols(), delta.data(), field.data());
  return field;
}

VecX assemble_geometry(const FaceTemplate& t, const DeformationGraph& g, const MorphableModel& m,
                       const VecX& alpha, const VecX& delta) {
  require(m.M_gid.rows() == 3 * g.node_count, "model/graph size mismatch");
  VecX field = graph_deformation(m, alpha, delta);
  VecX v = t.mean_positions;
  VecX up(3 * g.vertex_count);
  g.apply(field.data(), up.data());
  v += up;
  return v;
}

VecX assemble_reflectance(const FaceTemplate& t, const MorphableModel& m, const VecX& beta) {
  require(beta.size() == m.M_R.cols(), "beta dim mismatch");
  require(m.M_R.rows() == t.mean_reflectance.size(), "reflectance model size mismatch");
  VecX r = t.mean_reflectance;
  kernels::gemv_cols(m.M_R.data(), m.M_R.rows(), m.M_R.cols(), beta.data(), r.data());
  return r;
}

OrthogonalizeResult orthogonalize_identity(MorphableModel& m, const DeformationGraph& g) {
  OrthogonalizeResult res;
  if (m.M_gexp.cols() == 0 || m.M_gid.cols() == 0) return res;
  const MatX A = g.apply(m.M_gexp);  // 3N x m_e
  const MatX B = g.apply(m.M_gid);   // 3N x m_i
  MatX ata = A.transpose() * A;
  const MatX atb = A.transpose() * B;

  Eigen::SelfAdjointEigenSolver<MatX> eig(ata);
  const VecX ev = eig.eigenvalues();
  const double emax = ev.cwiseAbs().maxCoeff();
  if (emax <= 0.0) return res;  // expression basis is zero: nothing to project off
  if (ev.minCoeff() < 1e-12 * emax) {
    res.regularized = true;
    ata.diagonal().array() += 1e-12 * emax;
  }
  const MatX K = ata.ldlt().solve(atb);
  // Mesh-level projection B - A*K equals U*(M_gid - M_gexp*K), so pulling the
  // result back to graph level through U is exact.
  m.M_gid.noalias() -= m.M_gexp * K;
  return res;
}

namespace {
double spectral_norm(const MatX& m) {
  if (m.cols() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatX> eig(m.transpose() * m);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}
}  // namespace

double orthogonality_residual(const MorphableModel& m, const DeformationGraph& g) {
  if (m.M_gexp.cols() == 0 || m.M_gid.cols() == 0) return 0.0;
  const MatX A = g.apply(m.M_gexp);
  const MatX B = g.apply(m.M_gid);
  const double scale = spectral_norm(A) * spectral_norm(B);
  if (scale == 0.0) return 0.0;
  return (A.transpose() * B).cwiseAbs().maxCoeff() / scale;
}

namespace {
json matrix_to_json_rowmajor(const MatX& m) {
  json rows = json::array();
  std::vector<double> row(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

MatX matrix_from_json_rowmajor(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (static_cast<Eigen::Index>(j.size()) != rows) throw DataError("model matrix row count mismatch");
  MatX m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& r = j[i];
    if (static_cast<Eigen::Index>(r.size()) != cols) throw DataError("model matrix column count mismatch");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = r[c].get<double>();
  }
  return m;
}
}  // namespace

void save_model(const MorphableModel& m, int vertex_count, int node_count, const std::string& path) {
  json j;
  j["version"] = 1;
  j["N"] = vertex_count;
  j["G"] = node_count;
  j["m_i"] = m.m_i();
  j["m_e"] = m.m_e();
  j["m_r"] = m.m_r();
  j["M_gid"] = matrix_to_json_rowmajor(m.M_gid);
  j["M_gexp"] = matrix_to_json_rowmajor(m.M_gexp);
  j["M_R"] = matrix_to_json_rowmajor(m.M_R);
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for write: " + path);
  os << j.dump() << "\n";
}

MorphableModel load_model(const std::string& path, int expected_vertices, int expected_nodes) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open model: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw DataError("model parse error: " + std::string(e.what()));
  }
  const int n = j.at("N").get<int>();
  const int g = j.at("G").get<int>();
  if (n != expected_vertices || g != expected_nodes) {
    throw DataError("model header does not match template (N=" + std::to_string(n) +
                    ", G=" + std::to_string(g) + ")");
  }
  MorphableModel m;
  m.M_gid = matrix_from_json_rowmajor(j.at("M_gid"), 3 * g, j.at("m_i").get<int>());
  m.M_gexp = matrix_from_json_rowmajor(j.at("M_gexp"), 3 * g, j.at("m_e").get<int>());
  m.M_R = matrix_from_json_rowmajor(j.at("M_R"), 3 * n, j.at("m_r").get<int>());
  if (!m.M_gid.allFinite() || !m.M_gexp.allFinite() || !m.M_R.allFinite()) {
    throw DataError("model contains non-finite entries: " + path);
  }
  return m;
}

}  // namespace facekit
