#include "kernels/kernels.hpp"

namespace facekit::kernels {
namespace {

void axpy_scalar(double a, const double* x, std::size_t n, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double ssd_masked_scalar(const double* a, const double* b, const double* m, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += m[i] * d * d;
  }
  return acc;
}

void scaled_diff_masked_scalar(const double* a, const double* b, const double* m, double scale,
                               std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = m[i] * (scale * (a[i] - b[i]));
}

void coverage_span_scalar(const EdgeSpan e[3], double qx0, std::size_t n, std::uint8_t* cover) {
  for (std::size_t k = 0; k < n; ++k) {
    const double qx = qx0 + static_cast<double>(k);
    std::uint8_t in = 1;
    for (int j = 0; j < 3; ++j) {
      const double v = e[j].t - e[j].d * (qx - e[j].ax);
      const bool pass = v > 0.0 || (v == 0.0 && e[j].topleft);
      in = static_cast<std::uint8_t>(in & (pass ? 1 : 0));
    }
    cover[k] = in;
  }
}

}  // namespace

const KernelTable kScalarTable = {
    axpy_scalar, dot_scalar, ssd_masked_scalar, scaled_diff_masked_scalar, coverage_span_scalar,
};

}  // namespace facekit::kernels
