#include "scene/sh.hpp"

#include <cmath>

#include "common/errors.hpp"

namespace facekit {

namespace {
constexpr double k0 = 0.28209479177387814;  // sqrt(1/(4 pi))
constexpr double k1 = 0.48860251190291992;  // sqrt(3/(4 pi))
constexpr double k2a = 1.09254843059207907; // sqrt(15/(4 pi))
constexpr double k2b = 0.31539156525252005; // sqrt(5/(16 pi))
constexpr double k2c = 0.54627421529603954; // sqrt(15/(16 pi))
}  // namespace

std::array<double, kShCoeffs> sh_basis(const Vec3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-6) {
    throw ContractError("sh_basis: direction must be unit length");
  }
  const double x = n.x(), y = n.y(), z = n.z();
  return {k0,          k1 * y,        k1 * z,           k1 * x,          k2a * x * y,
          k2a * y * z, k2b * (3 * z * z - 1.0), k2a * x * z, k2c * (x * x - y * y)};
}

Eigen::Matrix<double, kShCoeffs, 3> sh_basis_gradient(const Vec3& n) {
  const double x = n.x(), y = n.y(), z = n.z();
  Eigen::Matrix<double, kShCoeffs, 3> g;
  g.setZero();
  g(1, 1) = k1;
  g(2, 2) = k1;
  g(3, 0) = k1;
  g(4, 0) = k2a * y;
  g(4, 1) = k2a * x;
  g(5, 1) = k2a * z;
  g(5, 2) = k2a * y;
  g(6, 2) = 6.0 * k2b * z;
  g(7, 0) = k2a * z;
  g(7, 2) = k2a * x;
  g(8, 0) = 2.0 * k2c * x;
  g(8, 1) = -2.0 * k2c * y;
  return g;
}

Vec3 shade(const Vec3& reflectance, const Vec3& n, const VecX& gamma) {
  require(gamma.size() == kGammaSize, "shade: gamma must have 27 entries");
  const auto basis = sh_basis(n);
  Vec3 c;
  for (int ch = 0; ch < 3; ++ch) {
    double irr = 0.0;
    for (int b = 0; b < kShCoeffs; ++b) irr += gamma[ch * kShCoeffs + b] * basis[b];
    c[ch] = reflectance[ch] * irr;
  }
  return c;
}

}  // namespace facekit
