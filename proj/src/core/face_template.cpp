#include "core/face_template.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "common/errors.hpp"
#include "io/obj_io.hpp"

namespace facekit {

using nlohmann::json;

std::vector<std::vector<int>> build_vertex_adjacency(int vertex_count,
                                                     const std::vector<std::array<int, 3>>& triangles) {
  std::vector<std::set<int>> adj(vertex_count);
  for (const auto& t : triangles) {
    for (int i = 0; i < 3; ++i) {
      adj[t[i]].insert(t[(i + 1) % 3]);
      adj[t[i]].insert(t[(i + 2) % 3]);
    }
  }
  std::vector<std::vector<int>> out(vertex_count);
  for (int v = 0; v < vertex_count; ++v) out[v].assign(adj[v].begin(), adj[v].end());
  return out;
}

double FaceTemplate::bbox_diagonal() const {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (int v = 0; v < vertex_count; ++v) {
    lo = lo.cwiseMin(vertex(v));
    hi = hi.cwiseMax(vertex(v));
  }
  return (hi - lo).norm();
}

namespace {

void check_chain(const FaceTemplate& t, const std::vector<int>& chain, const std::string& name) {
  if (chain.size() < 2) throw DataError("lip ring too short: " + name);
  std::unordered_set<int> seen;
  for (size_t i = 0; i < chain.size(); ++i) {
    const int v = chain[i];
    if (v < 0 || v >= t.vertex_count) throw DataError("lip ring vertex out of range: " + name);
    if (!seen.insert(v).second) throw DataError("lip ring revisits a vertex: " + name);
    if (i > 0) {
      const auto& nb = t.vertex_neighbors[chain[i - 1]];
      if (std::find(nb.begin(), nb.end(), v) == nb.end()) {
        throw DataError("lip ring not edge-connected: " + name);
      }
    }
  }
}

// Outer and inner chains of one lip must share exactly their two endpoints
// (the mouth corners), closing the lip boundary loop.
void check_lip_loop(const std::vector<int>& outer, const std::vector<int>& inner, const std::string& name) {
  if (outer.front() != inner.front() || outer.back() != inner.back()) {
    throw DataError("lip chains do not share corner endpoints: " + name);
  }
  std::unordered_set<int> o(outer.begin() + 1, outer.end() - 1);
  for (size_t i = 1; i + 1 < inner.size(); ++i) {
    if (o.count(inner[i]) != 0) throw DataError("lip chains intersect away from corners: " + name);
  }
}

// Region growing from the inner chain, fenced by the outer chain; the lip
// band is everything reached plus the fence itself.
std::vector<int> grow_lip_band(const FaceTemplate& t, const std::vector<int>& inner,
                               const std::vector<int>& outer) {
  std::unordered_set<int> fence(outer.begin(), outer.end());
  fence.insert(inner.front());
  fence.insert(inner.back());
  std::unordered_set<int> band(outer.begin(), outer.end());
  std::deque<int> queue;
  for (int v : inner) {
    band.insert(v);
    if (fence.count(v) == 0) queue.push_back(v);
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int n : t.vertex_neighbors[v]) {
      if (band.count(n) != 0) continue;
      band.insert(n);
      if (fence.count(n) == 0) queue.push_back(n);
    }
  }
  std::vector<int> out(band.begin(), band.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> band_triangles(const FaceTemplate& t, const std::vector<int>& band) {
  std::unordered_set<int> in(band.begin(), band.end());
  std::vector<int> tris;
  for (size_t i = 0; i < t.triangles.size(); ++i) {
    const auto& tr = t.triangles[i];
    if (in.count(tr[0]) != 0 && in.count(tr[1]) != 0 && in.count(tr[2]) != 0) {
      tris.push_back(static_cast<int>(i));
    }
  }
  return tris;
}

}  // namespace

void FaceTemplate::finalize() {
  if (vertex_count <= 0) throw DataError("template has no vertices");
  if (mean_positions.size() != 3 * vertex_count) throw DataError("mean_positions size mismatch");
  if (mean_reflectance.size() != 3 * vertex_count) throw DataError("mean_reflectance size mismatch");
  for (const auto& t : triangles) {
    for (int i : t) {
      if (i < 0 || i >= vertex_count) throw DataError("triangle index out of range");
    }
  }
  if (landmark_vertex_ids.size() != kLandmarkCount) throw DataError("expected 66 landmark ids");
  {
    std::unordered_set<int> seen;
    for (int v : landmark_vertex_ids) {
      if (v < 0 || v >= vertex_count) throw DataError("landmark id out of range");
      if (!seen.insert(v).second) throw DataError("landmark ids must be distinct");
    }
  }
  {
    std::unordered_set<int> seen;
    for (int v : graph_node_ids) {
      if (v < 0 || v >= vertex_count) throw DataError("graph node id out of range");
      if (!seen.insert(v).second) throw DataError("graph node ids must be distinct");
    }
  }
  for (const auto& c : contour_landmarks) {
    if (c.landmark_index < 0 || c.landmark_index >= kLandmarkCount) {
      throw DataError("contour landmark index out of range");
    }
    for (int v : c.candidates) {
      if (v < 0 || v >= vertex_count) throw DataError("contour candidate out of range");
    }
  }

  vertex_neighbors = build_vertex_adjacency(vertex_count, triangles);
  check_chain(*this, lip_rings.upper_outer, "upper_outer");
  check_chain(*this, lip_rings.upper_inner, "upper_inner");
  check_chain(*this, lip_rings.lower_outer, "lower_outer");
  check_chain(*this, lip_rings.lower_inner, "lower_inner");
  check_lip_loop(lip_rings.upper_outer, lip_rings.upper_inner, "upper");
  check_lip_loop(lip_rings.lower_outer, lip_rings.lower_inner, "lower");

  upper_lip_vertices = grow_lip_band(*this, lip_rings.upper_inner, lip_rings.upper_outer);
  lower_lip_vertices = grow_lip_band(*this, lip_rings.lower_inner, lip_rings.lower_outer);
  upper_lip_triangles = band_triangles(*this, upper_lip_vertices);
  lower_lip_triangles = band_triangles(*this, lower_lip_vertices);
}

FaceTemplate load_face_template(const std::string& obj_path, const std::string& sidecar_path) {
  ObjMesh mesh = load_obj(obj_path);
  FaceTemplate t;
  t.vertex_count = static_cast<int>(mesh.positions.size() / 3);
  t.triangles = mesh.triangles;
  t.mean_positions = mesh.positions;
  if (mesh.colors.size() != mesh.positions.size()) {
    throw DataError("template obj must carry vertex colors (mean reflectance): " + obj_path);
  }
  t.mean_reflectance = mesh.colors;

  std::ifstream is(sidecar_path);
  if (!is) throw DataError("cannot open sidecar: " + sidecar_path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw DataError("sidecar parse error: " + std::string(e.what()));
  }
  try {
    t.landmark_vertex_ids = j.at("landmarks").get<std::vector<int>>();
    t.graph_node_ids = j.at("graph_nodes").get<std::vector<int>>();
    const auto& lr = j.at("lip_rings");
    t.lip_rings.upper_outer = lr.at("upper_outer").get<std::vector<int>>();
    t.lip_rings.upper_inner = lr.at("upper_inner").get<std::vector<int>>();
    t.lip_rings.lower_outer = lr.at("lower_outer").get<std::vector<int>>();
    t.lip_rings.lower_inner = lr.at("lower_inner").get<std::vector<int>>();
    if (j.contains("contour_landmarks")) {
      for (const auto& c : j.at("contour_landmarks")) {
        ContourLandmark cl;
        cl.landmark_index = c.at("landmark").get<int>();
        cl.candidates = c.at("candidates").get<std::vector<int>>();
        t.contour_landmarks.push_back(std::move(cl));
      }
    }
  } catch (const json::exception& e) {
    throw DataError("sidecar schema error: " + std::string(e.what()));
  }
  t.finalize();
  return t;
}

void save_face_template(const FaceTemplate& t, const std::string& obj_path, const std::string& sidecar_path) {
  ObjMesh mesh;
  mesh.positions = t.mean_positions;
  mesh.colors = t.mean_reflectance;
  mesh.triangles = t.triangles;
  save_obj(obj_path, mesh);

  json j;
  j["version"] = 1;
  j["landmarks"] = t.landmark_vertex_ids;
  j["graph_nodes"] = t.graph_node_ids;
  j["lip_rings"] = {{"upper_outer", t.lip_rings.upper_outer},
                    {"upper_inner", t.lip_rings.upper_inner},
                    {"lower_outer", t.lip_rings.lower_outer},
                    {"lower_inner", t.lip_rings.lower_inner}};
  json cls = json::array();
  for (const auto& c : t.contour_landmarks) {
    cls.push_back({{"landmark", c.landmark_index}, {"candidates", c.candidates}});
  }
  j["contour_landmarks"] = cls;
  std::ofstream os(sidecar_path);
  if (!os) throw DataError("cannot open for write: " + sidecar_path);
  os << j.dump(2) << "\n";
}

}  // namespace facekit
