#include "curvilin/simd.hpp"

namespace curvilin::simd {
namespace {

void affine(double base, double scale, const double* y, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] = base + scale * y[j];
}

void min_scaled(double base, double scale, const double* y, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double v = scale * y[j];
    out[j] = v < base ? v : base;
  }
}

void lincomb(const double* c, double a, const double* d, double b, double* out,
             std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = c[k] * a + d[k] * b;
}

void max_into(double* dst, const double* src, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j)
    if (src[j] > dst[j]) dst[j] = src[j];
}

void min_into(double* dst, const double* src, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j)
    if (src[j] < dst[j]) dst[j] = src[j];
}

std::size_t argmax(const double* x, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (x[j] > x[best]) best = j;
  return best;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", affine, min_scaled, lincomb, max_into, min_into, argmax};
  return k;
}

}  // namespace curvilin::simd
