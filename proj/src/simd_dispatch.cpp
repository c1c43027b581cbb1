#include <atomic>
#include <cstdlib>
#include <cstring>

#include "curvilin/simd.hpp"

namespace curvilin::simd {
namespace {

const Kernels* best_available() {
  if (const char* env = std::getenv("CURVILIN_SIMD"); env && std::strcmp(env, "scalar") == 0)
    return &scalar_kernels();
  if (auto* k = avx2_kernels()) return k;
  if (auto* k = neon_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const Kernels*>& slot() {
  static std::atomic<const Kernels*> s{best_available()};
  return s;
}

}  // namespace

const Kernels& active() { return *slot().load(std::memory_order_relaxed); }

bool select(const char* name) {
  const Kernels* k = nullptr;
  if (std::strcmp(name, "scalar") == 0) k = &scalar_kernels();
  else if (std::strcmp(name, "avx2") == 0) k = avx2_kernels();
  else if (std::strcmp(name, "neon") == 0) k = neon_kernels();
  else if (std::strcmp(name, "auto") == 0) k = best_available();
  if (!k) return false;
  slot().store(k, std::memory_order_relaxed);
  return true;
}

}  // namespace curvilin::simd
