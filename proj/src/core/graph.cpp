#include "core/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "common/errors.hpp"

namespace facekit {

namespace {
constexpr double kSnapDistance = 1e-12;
}

void DeformationGraph::apply(const double* node_field, double* vertex_field) const {
  for (int v = 0; v < vertex_count; ++v) {
    double x = 0.0, y = 0.0, z = 0.0;
    for (int r = row_offsets[v]; r < row_offsets[v + 1]; ++r) {
      const double w = row_weights[r];
      const double* n = node_field + 3 * row_nodes[r];
      x += w * n[0];
      y += w * n[1];
      z += w * n[2];
    }
    vertex_field[3 * v] = x;
    vertex_field[3 * v + 1] = y;
    vertex_field[3 * v + 2] = z;
  }
}

void DeformationGraph::apply_transpose(const double* vertex_field, double* node_field) const {
  std::fill(node_field, node_field + 3 * node_count, 0.0);
  for (int v = 0; v < vertex_count; ++v) {
    const double* f = vertex_field + 3 * v;
    for (int r = row_offsets[v]; r < row_offsets[v + 1]; ++r) {
      const double w = row_weights[r];
      double* n = node_field + 3 * row_nodes[r];
      n[0] += w * f[0];
      n[1] += w * f[1];
      n[2] += w * f[2];
    }
  }
}

MatX DeformationGraph::apply(const MatX& graph_columns) const {
  require(graph_columns.rows() == 3 * node_count, "graph column size mismatch");
  MatX out(3 * vertex_count, graph_columns.cols());
  for (Eigen::Index c = 0; c < graph_columns.cols(); ++c) {
    apply(graph_columns.col(c).data(), out.col(c).data());
  }
  return out;
}

VecX DeformationGraph::apply(const VecX& node_field) const {
  require(node_field.size() == 3 * node_count, "node field size mismatch");
  VecX out(3 * vertex_count);
  apply(node_field.data(), out.data());
  return out;
}

VecX DeformationGraph::apply_transpose(const VecX& vertex_field) const {
  require(vertex_field.size() == 3 * vertex_count, "vertex field size mismatch");
  VecX out(3 * node_count);
  apply_transpose(vertex_field.data(), out.data());
  return out;
}

std::vector<double> mesh_geodesics(const FaceTemplate& t, const std::vector<int>& sources) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(t.vertex_count, inf);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (int s : sources) {
    dist[s] = 0.0;
    heap.emplace(0.0, s);
  }
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    const Vec3 pv = t.vertex(v);
    for (int n : t.vertex_neighbors[v]) {
      const double nd = d + (t.vertex(n) - pv).norm();
      if (nd < dist[n]) {
        dist[n] = nd;
        heap.emplace(nd, n);
      }
    }
  }
  return dist;
}

DeformationGraph build_upsampling(const FaceTemplate& t, int k, double radius, int k_adj) {
  require(!t.graph_node_ids.empty(), "template has no graph nodes");
  require(k >= 1, "build_upsampling: k must be >= 1");
  const int G = static_cast<int>(t.graph_node_ids.size());
  const int N = t.vertex_count;

  // Geodesic distance from every node to every vertex.
  std::vector<std::vector<double>> node_dist(G);
  for (int g = 0; g < G; ++g) node_dist[g] = mesh_geodesics(t, {t.graph_node_ids[g]});

  DeformationGraph graph;
  graph.node_count = G;
  graph.vertex_count = N;
  graph.node_ids = t.graph_node_ids;
  graph.node_rest_positions.resize(3 * G);
  for (int g = 0; g < G; ++g) {
    graph.node_rest_positions.segment<3>(3 * g) = t.vertex(t.graph_node_ids[g]);
  }

  graph.row_offsets.assign(N + 1, 0);
  std::vector<std::pair<double, int>> cand;
  for (int v = 0; v < N; ++v) {
    cand.clear();
    for (int g = 0; g < G; ++g) {
      const double d = node_dist[g][v];
      if (d <= radius) cand.emplace_back(d, g);
    }
    if (cand.empty()) {
      throw DataError("build_upsampling: vertex " + std::to_string(v) +
                      " has no graph node within influence radius");
    }
    const int take = std::min<int>(k, static_cast<int>(cand.size()));
    std::partial_sort(cand.begin(), cand.begin() + take, cand.end());
    if (cand[0].first < kSnapDistance) {
      graph.row_nodes.push_back(cand[0].second);
      graph.row_weights.push_back(1.0);
    } else {
      double wsum = 0.0;
      for (int i = 0; i < take; ++i) wsum += 1.0 / cand[i].first;
      for (int i = 0; i < take; ++i) {
        graph.row_nodes.push_back(cand[i].second);
        graph.row_weights.push_back((1.0 / cand[i].first) / wsum);
      }
    }
    graph.row_offsets[v + 1] = static_cast<int>(graph.row_nodes.size());
  }

  // Node adjacency for the smoothness term: geodesic kNN, symmetrized.
  std::vector<std::set<int>> adj(G);
  for (int g = 0; g < G; ++g) {
    std::vector<std::pair<double, int>> nd;
    for (int h = 0; h < G; ++h) {
      if (h != g) nd.emplace_back(node_dist[g][t.graph_node_ids[h]], h);
    }
    const int take = std::min<int>(k_adj, static_cast<int>(nd.size()));
    std::partial_sort(nd.begin(), nd.begin() + take, nd.end());
    for (int i = 0; i < take; ++i) {
      adj[g].insert(nd[i].second);
      adj[nd[i].second].insert(g);
    }
  }
  graph.node_neighbors.resize(G);
  for (int g = 0; g < G; ++g) graph.node_neighbors[g].assign(adj[g].begin(), adj[g].end());
  return graph;
}

}  // namespace facekit
