#include <doctest.h>

#include <cstring>
#include <vector>

#include "curvilin/simd.hpp"
#include "curvilin/verify.hpp"

using namespace curvilin;

namespace {

bool same_bits(const std::vector<double>& x, const std::vector<double>& y) {
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
}

void compare(const simd::Kernels& ref, const simd::Kernels& k) {
  Rng rng(3);
  for (std::size_t n : {1u, 3u, 4u, 7u, 16u, 33u, 100u}) {
    std::vector<double> y(n), c(n), d(n), o1(n), o2(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = rng.uniform(0, 5), c[i] = rng.uniform(), d[i] = rng.uniform();
    double base = rng.uniform(), scale = rng.uniform(0, 2);
    ref.affine(base, scale, y.data(), o1.data(), n);
    k.affine(base, scale, y.data(), o2.data(), n);
    CHECK(same_bits(o1, o2));
    ref.min_scaled(base, scale, y.data(), o1.data(), n);
    k.min_scaled(base, scale, y.data(), o2.data(), n);
    CHECK(same_bits(o1, o2));
    ref.lincomb(c.data(), 1.7, d.data(), 2.3, o1.data(), n);
    k.lincomb(c.data(), 1.7, d.data(), 2.3, o2.data(), n);
    CHECK(same_bits(o1, o2));
    std::vector<double> a1 = c, a2 = c;
    ref.max_into(a1.data(), d.data(), n);
    k.max_into(a2.data(), d.data(), n);
    CHECK(same_bits(a1, a2));
    a1 = c, a2 = c;
    ref.min_into(a1.data(), d.data(), n);
    k.min_into(a2.data(), d.data(), n);
    CHECK(same_bits(a1, a2));
    y[n / 2] = 9;
    if (n > 2) y[n - 1] = 9;
    CHECK(ref.argmax(y.data(), n) == k.argmax(y.data(), n));
  }
}

}  // namespace

TEST_CASE("vector kernels match the scalar reference bit for bit") {
  const simd::Kernels& ref = simd::scalar_kernels();
  int tested = 0;
  for (const simd::Kernels* k : {simd::avx2_kernels(), simd::neon_kernels()}) {
    if (!k) continue;
    ++tested;
    INFO(k->name);
    compare(ref, *k);
  }
  MESSAGE("vector variants tested: " << tested);
}

TEST_CASE("argmax picks the first maximum") {
  std::vector<double> x{1, 4, 2, 4, 0};
  CHECK(simd::scalar_kernels().argmax(x.data(), x.size()) == 1);
}

TEST_CASE("variant selection") {
  CHECK(simd::select("scalar"));
  CHECK(std::strcmp(simd::active().name, "scalar") == 0);
  CHECK_FALSE(simd::select("bogus"));
  CHECK(simd::select("auto"));
}
