#include "kernels/kernels.hpp"

#include <immintrin.h>

// Deliberately mul+add instead of FMA: keeps elementwise kernels bit-identical
// to the scalar reference (the baseline TU has no FMA either).

namespace facekit::kernels {
namespace {

void axpy_avx2(double a, const double* x, std::size_t n, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double ssd_masked_avx2(const double* a, const double* b, const double* m, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(m + i), _mm256_mul_pd(d, d)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += m[i] * d * d;
  }
  return s;
}

void scaled_diff_masked_avx2(const double* a, const double* b, const double* m, double scale,
                             std::size_t n, double* out) {
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(m + i), _mm256_mul_pd(vs, d)));
  }
  for (; i < n; ++i) out[i] = m[i] * (scale * (a[i] - b[i]));
}

void coverage_span_avx2(const EdgeSpan e[3], double qx0, std::size_t n, std::uint8_t* cover) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d step = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  __m256d vt[3], vd[3], vax[3], vtl[3];
  for (int j = 0; j < 3; ++j) {
    vt[j] = _mm256_set1_pd(e[j].t);
    vd[j] = _mm256_set1_pd(e[j].d);
    vax[j] = _mm256_set1_pd(e[j].ax);
    vtl[j] = e[j].topleft ? _mm256_castsi256_pd(_mm256_set1_epi64x(-1)) : zero;
  }
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d qx = _mm256_add_pd(_mm256_set1_pd(qx0 + static_cast<double>(k)), step);
    __m256d in = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    for (int j = 0; j < 3; ++j) {
      const __m256d v = _mm256_sub_pd(vt[j], _mm256_mul_pd(vd[j], _mm256_sub_pd(qx, vax[j])));
      const __m256d gt = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
      const __m256d eq = _mm256_and_pd(_mm256_cmp_pd(v, zero, _CMP_EQ_OQ), vtl[j]);
      in = _mm256_and_pd(in, _mm256_or_pd(gt, eq));
    }
    const int bits = _mm256_movemask_pd(in);
    cover[k + 0] = static_cast<std::uint8_t>(bits & 1);
    cover[k + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
    cover[k + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
    cover[k + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
  }
  for (; k < n; ++k) {
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

const KernelTable kAvx2Table = {
    axpy_avx2, dot_avx2, ssd_masked_avx2, scaled_diff_masked_avx2, coverage_span_avx2,
};

}  // namespace facekit::kernels
