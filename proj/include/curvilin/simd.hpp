#pragma once

#include <cstddef>

namespace curvilin::simd {

// Batch kernels for the lambda x pair reductions. Every variant must produce
// results bit-identical to the scalar reference.
struct Kernels {
  const char* name;
  // out[j] = base + scale * y[j]
  void (*affine)(double base, double scale, const double* y, double* out, std::size_t n);
  // out[j] = min(base, scale * y[j])
  void (*min_scaled)(double base, double scale, const double* y, double* out, std::size_t n);
  // out[k] = c[k] * a + d[k] * b
  void (*lincomb)(const double* c, double a, const double* d, double b, double* out,
                  std::size_t n);
  void (*max_into)(double* dst, const double* src, std::size_t n);
  void (*min_into)(double* dst, const double* src, std::size_t n);
  // Index of the first maximum; n must be positive.
  std::size_t (*argmax)(const double* x, std::size_t n);
};

const Kernels& scalar_kernels();
// nullptr when the variant is not compiled in or the CPU lacks it.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

// Best available variant, unless CURVILIN_SIMD=scalar.
const Kernels& active();
// Override the active variant ("scalar", "avx2", "neon", or "auto"); returns false if unavailable.
bool select(const char* name);

}  // namespace curvilin::simd
