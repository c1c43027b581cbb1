#include "curvilin/simd.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace curvilin::simd {
namespace {

void affine(double base, double scale, const double* y, double* out, std::size_t n) {
  const float64x2_t vb = vdupq_n_f64(base);
  const float64x2_t vs = vdupq_n_f64(scale);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2)
    vst1q_f64(out + j, vaddq_f64(vb, vmulq_f64(vs, vld1q_f64(y + j))));
  for (; j < n; ++j) out[j] = base + scale * y[j];
}

void min_scaled(double base, double scale, const double* y, double* out, std::size_t n) {
  const float64x2_t vb = vdupq_n_f64(base);
  const float64x2_t vs = vdupq_n_f64(scale);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    float64x2_t v = vmulq_f64(vs, vld1q_f64(y + j));
    vst1q_f64(out + j, vbslq_f64(vcltq_f64(v, vb), v, vb));
  }
  for (; j < n; ++j) {
    double v = scale * y[j];
    out[j] = v < base ? v : base;
  }
}

void lincomb(const double* c, double a, const double* d, double b, double* out,
             std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    float64x2_t x = vmulq_f64(vld1q_f64(c + k), va);
    float64x2_t y = vmulq_f64(vld1q_f64(d + k), vb);
    vst1q_f64(out + k, vaddq_f64(x, y));
  }
  for (; k < n; ++k) out[k] = c[k] * a + d[k] * b;
}

void max_into(double* dst, const double* src, std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    float64x2_t s = vld1q_f64(src + j), d = vld1q_f64(dst + j);
    vst1q_f64(dst + j, vbslq_f64(vcgtq_f64(s, d), s, d));
  }
  for (; j < n; ++j)
    if (src[j] > dst[j]) dst[j] = src[j];
}

void min_into(double* dst, const double* src, std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    float64x2_t s = vld1q_f64(src + j), d = vld1q_f64(dst + j);
    vst1q_f64(dst + j, vbslq_f64(vcltq_f64(s, d), s, d));
  }
  for (; j < n; ++j)
    if (src[j] < dst[j]) dst[j] = src[j];
}

}  // namespace

const Kernels* neon_kernels() {
  static const Kernels k{"neon", affine, min_scaled, lincomb, max_into, min_into,
                         scalar_kernels().argmax};
  return &k;
}

}  // namespace curvilin::simd

#else

namespace curvilin::simd {
const Kernels* neon_kernels() { return nullptr; }
}  // namespace curvilin::simd

#endif
