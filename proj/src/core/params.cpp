#include "core/params.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "common/errors.hpp"

namespace facekit {

using nlohmann::json;

ClipParams make_clip_params(int m_i, int m_e, int m_r, int frames) {
  ClipParams p;
  p.alpha = VecX::Zero(m_i);
  p.beta = VecX::Zero(m_r);
  p.frames.resize(frames);
  for (auto& f : p.frames) f.delta = VecX::Zero(m_e);
  return p;
}

namespace {
std::vector<double> to_vec(const VecX& v) { return {v.data(), v.data() + v.size()}; }

VecX from_vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const VecX>(v.data(), static_cast<Eigen::Index>(v.size()));
}
}  // namespace

void save_clip_params(const ClipParams& p, const std::string& path) {
  json j;
  j["alpha"] = to_vec(p.alpha);
  j["beta"] = to_vec(p.beta);
  json frames = json::array();
  for (const auto& f : p.frames) {
    frames.push_back({{"delta", to_vec(f.delta)},
                      {"gamma", to_vec(f.gamma)},
                      {"rotation", std::vector<double>{f.rotation[0], f.rotation[1], f.rotation[2]}},
                      {"translation",
                       std::vector<double>{f.translation[0], f.translation[1], f.translation[2]}}});
  }
  j["frames"] = frames;
  std::ofstream os(path);
  if (!os) throw DataError("cannot open for write: " + path);
  os << j.dump(2) << "\n";
}

ClipParams load_clip_params(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open params: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw DataError("params parse error: " + std::string(e.what()));
  }
  ClipParams p;
  p.alpha = from_vec(j.at("alpha"));
  p.beta = from_vec(j.at("beta"));
  for (const auto& jf : j.at("frames")) {
    FrameParams f;
    f.delta = from_vec(jf.at("delta"));
    f.gamma = from_vec(jf.at("gamma"));
    if (f.gamma.size() != kGammaSize) throw DataError("gamma must have 27 entries");
    const VecX rot = from_vec(jf.at("rotation"));
    const VecX tr = from_vec(jf.at("translation"));
    if (rot.size() != 3 || tr.size() != 3) throw DataError("pose must have 3+3 entries");
    f.rotation = rot.head<3>();
    f.translation = tr.head<3>();
    p.frames.push_back(std::move(f));
  }
  return p;
}

}  // namespace facekit
