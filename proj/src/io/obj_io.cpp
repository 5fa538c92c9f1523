#include "io/obj_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "common/errors.hpp"

namespace facekit {

ObjMesh load_obj(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open obj: " + path);
  std::vector<double> pos;
  std::vector<double> col;
  ObjMesh mesh;
  std::string line;
  bool any_color = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw DataError("malformed vertex line in " + path);
      pos.insert(pos.end(), {x, y, z});
      double r, g, b;
      if (ls >> r >> g >> b) {
        col.insert(col.end(), {r, g, b});
        any_color = true;
      } else {
        col.insert(col.end(), {0.0, 0.0, 0.0});
      }
    } else if (tag == "f") {
      std::array<int, 3> tri{};
      for (int i = 0; i < 3; ++i) {
        std::string tok;
        if (!(ls >> tok)) throw DataError("non-triangle face in " + path);
        tri[i] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
      }
      std::string extra;
      if (ls >> extra) throw DataError("non-triangle face in " + path);
      mesh.triangles.push_back(tri);
    }
  }
  mesh.positions = Eigen::Map<VecX>(pos.data(), static_cast<Eigen::Index>(pos.size()));
  if (any_color) mesh.colors = Eigen::Map<VecX>(col.data(), static_cast<Eigen::Index>(col.size()));
  const int n = static_cast<int>(pos.size() / 3);
  for (const auto& t : mesh.triangles) {
    for (int i : t) {
      if (i < 0 || i >= n) throw DataError("face index out of range in " + path);
    }
  }
  return mesh;
}

void save_obj(const std::string& path, const ObjMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for write: " + path);
  const bool colors = mesh.colors.size() == mesh.positions.size();
  const Eigen::Index n = mesh.positions.size() / 3;
  char buf[256];
  for (Eigen::Index v = 0; v < n; ++v) {
    if (colors) {
      std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g %.17g %.17g %.17g\n", mesh.positions[3 * v],
                    mesh.positions[3 * v + 1], mesh.positions[3 * v + 2], mesh.colors[3 * v],
                    mesh.colors[3 * v + 1], mesh.colors[3 * v + 2]);
    } else {
      std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", mesh.positions[3 * v],
                    mesh.positions[3 * v + 1], mesh.positions[3 * v + 2]);
    }
    os << buf;
  }
  for (const auto& t : mesh.triangles) {
    os << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  }
  if (!os) throw DataError("obj write failed: " + path);
}

}  // namespace facekit
