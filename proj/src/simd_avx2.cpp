#include "curvilin/simd.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace curvilin::simd {
namespace {

#define CURVILIN_AVX2 __attribute__((target("avx2")))

CURVILIN_AVX2 void affine(double base, double scale, const double* y, double* out,
                          std::size_t n) {
  const __m256d vb = _mm256_set1_pd(base);
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d v = _mm256_mul_pd(vs, _mm256_loadu_pd(y + j));
    _mm256_storeu_pd(out + j, _mm256_add_pd(vb, v));
  }
  for (; j < n; ++j) out[j] = base + scale * y[j];
}

CURVILIN_AVX2 void min_scaled(double base, double scale, const double* y, double* out,
                              std::size_t n) {
  const __m256d vb = _mm256_set1_pd(base);
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d v = _mm256_mul_pd(vs, _mm256_loadu_pd(y + j));
    // _mm256_min_pd(v, b) returns v < b ? v : b, matching the scalar form.
    _mm256_storeu_pd(out + j, _mm256_min_pd(v, vb));
  }
  for (; j < n; ++j) {
    double v = scale * y[j];
    out[j] = v < base ? v : base;
  }
}

CURVILIN_AVX2 void lincomb(const double* c, double a, const double* d, double b, double* out,
                           std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d x = _mm256_mul_pd(_mm256_loadu_pd(c + k), va);
    __m256d y = _mm256_mul_pd(_mm256_loadu_pd(d + k), vb);
    _mm256_storeu_pd(out + k, _mm256_add_pd(x, y));
  }
  for (; k < n; ++k) out[k] = c[k] * a + d[k] * b;
}

CURVILIN_AVX2 void max_into(double* dst, const double* src, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d s = _mm256_loadu_pd(src + j);
    __m256d d = _mm256_loadu_pd(dst + j);
    // s > d ? s : d
    _mm256_storeu_pd(dst + j, _mm256_blendv_pd(d, s, _mm256_cmp_pd(s, d, _CMP_GT_OQ)));
  }
  for (; j < n; ++j)
    if (src[j] > dst[j]) dst[j] = src[j];
}

CURVILIN_AVX2 void min_into(double* dst, const double* src, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d s = _mm256_loadu_pd(src + j);
    __m256d d = _mm256_loadu_pd(dst + j);
    _mm256_storeu_pd(dst + j, _mm256_blendv_pd(d, s, _mm256_cmp_pd(s, d, _CMP_LT_OQ)));
  }
  for (; j < n; ++j)
    if (src[j] < dst[j]) dst[j] = src[j];
}

CURVILIN_AVX2 std::size_t argmax(const double* x, std::size_t n) {
  if (n < 8) return scalar_kernels().argmax(x, n);
  __m256d best = _mm256_loadu_pd(x);
  std::size_t j = 4;
  for (; j + 4 <= n; j += 4) best = _mm256_max_pd(best, _mm256_loadu_pd(x + j));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double m = lanes[0];
  for (int l = 1; l < 4; ++l)
    if (lanes[l] > m) m = lanes[l];
  for (; j < n; ++j)
    if (x[j] > m) m = x[j];
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] == m) return i;
  return 0;
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{"avx2", affine, min_scaled, lincomb, max_into, min_into, argmax};
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok ? &k : nullptr;
}

}  // namespace curvilin::simd

#else

namespace curvilin::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace curvilin::simd

#endif
