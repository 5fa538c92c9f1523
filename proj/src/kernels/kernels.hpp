#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace facekit::kernels {

// Hot inner loops used by model assembly, the rasterizer and the image
// losses. Scalar reference implementations are the semantic ground truth;
// the AVX2 variants are selected at runtime when the CPU supports them and
// are equivalence-tested against scalar. Elementwise kernels (axpy,
// scaled_diff_masked, coverage_span) must produce bit-identical results in
// every backend; reductions (dot, ssd_masked) may differ by summation order
// within a small relative tolerance.

enum class Backend { scalar, avx2 };

// One screen-space edge equation restricted to a pixel row:
//   value(qx) = t - d * (qx - ax)
// with t = (bx-ax)*(qy-ay) precomputed for the row. `topleft` decides
// whether value == 0 counts as covered (top-left fill convention).
struct EdgeSpan {
  double t;
  double d;
  double ax;
  bool topleft;
};

struct KernelTable {
  void (*axpy)(double a, const double* x, std::size_t n, double* y);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*ssd_masked)(const double* a, const double* b, const double* m, std::size_t n);
  void (*scaled_diff_masked)(const double* a, const double* b, const double* m, double scale,
                             std::size_t n, double* out);
  void (*coverage_span)(const EdgeSpan e[3], double qx0, std::size_t n, std::uint8_t* cover);
};

extern const KernelTable kScalarTable;
#if FACEKIT_BUILD_AVX2
extern const KernelTable kAvx2Table;
#endif

bool avx2_supported();

// Active backend. Defaults to the best supported one; FACEKIT_KERNELS=scalar|avx2
// overrides at startup, set_backend() overrides programmatically.
Backend active_backend();
void set_backend(Backend b);
std::string backend_name(Backend b);
const KernelTable& table();

// y += a * x
inline void axpy(double a, const double* x, std::size_t n, double* y) { table().axpy(a, x, n, y); }

inline double dot(const double* x, const double* y, std::size_t n) { return table().dot(x, y, n); }

// sum_i m[i] * (a[i] - b[i])^2
inline double ssd_masked(const double* a, const double* b, const double* m, std::size_t n) {
  return table().ssd_masked(a, b, m, n);
}

// out[i] = m[i] * scale * (a[i] - b[i])
inline void scaled_diff_masked(const double* a, const double* b, const double* m, double scale,
                               std::size_t n, double* out) {
  table().scaled_diff_masked(a, b, m, scale, n, out);
}

// cover[k] = 1 iff pixel center qx0+k passes all three edge tests.
inline void coverage_span(const EdgeSpan e[3], double qx0, std::size_t n, std::uint8_t* cover) {
  table().coverage_span(e, qx0, n, cover);
}

// Column-major dense helpers layered on the primitives above.
// y(rows) += M(rows x cols, col-major) * c(cols)
inline void gemv_cols(const double* M, std::size_t rows, std::size_t cols, const double* c, double* y) {
  for (std::size_t j = 0; j < cols; ++j) axpy(c[j], M + j * rows, rows, y);
}

// g(cols) += M^T * v
inline void gemv_cols_t(const double* M, std::size_t rows, std::size_t cols, const double* v, double* g) {
  for (std::size_t j = 0; j < cols; ++j) g[j] += dot(M + j * rows, v, rows);
}

// M(rows x cols, col-major) += v * c^T
inline void outer_acc(double* M, std::size_t rows, std::size_t cols, const double* v, const double* c) {
  for (std::size_t j = 0; j < cols; ++j) axpy(c[j], v, rows, M + j * rows);
}

}  // namespace facekit::kernels
