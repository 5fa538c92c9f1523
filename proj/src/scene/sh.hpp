#pragma once

#include <array>

#include "core/params.hpp"
#include "core/types.hpp"

namespace facekit {

// Real spherical harmonics, bands 0-2, in the standard enumeration
//   H0 = 0.2820948
//   H1..H3 = 0.4886025 * {y, z, x}
//   H4..H8 = 1.0925484*xy, 1.0925484*yz, 0.3153916*(3z^2-1), 1.0925484*xz,
//            0.5462742*(x^2-y^2)
// Input must be unit length within 1e-6.
std::array<double, kShCoeffs> sh_basis(const Vec3& n);

// Row b = dH_b/dn.
Eigen::Matrix<double, kShCoeffs, 3> sh_basis_gradient(const Vec3& n);

// Lambertian shading, Eq.-style: c_ch = r_ch * sum_b gamma[ch*9+b] * H_b(n).
// gamma is channel-major 3x9; unclamped.
Vec3 shade(const Vec3& reflectance, const Vec3& n, const VecX& gamma);

}  // namespace facekit
