#include <doctest.h>

#include "curvilin/curvsum.hpp"
#include "curvilin/funcs.hpp"
#include "curvilin/verify.hpp"

using namespace curvilin;
using doctest::Approx;

namespace {

GridFunction random_function(Rng& rng, std::size_t n, std::size_t cells) {
  StaircaseSet s = random_staircase(rng, n, cells, 1.0 / double(cells), 1.0, 8, 0.8);
  return from_staircase(s);
}

SumSpec spec_of(double p, double t, std::vector<double> alphas) {
  SumSpec s;
  s.p = p;
  s.t = t;
  s.alphas = PowerVector(std::move(alphas));
  return s;
}

}  // namespace

TEST_CASE("hypograph keeps the integral") {
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    GridFunction f = random_function(rng, 1 + std::size_t(i % 2), 8);
    CHECK(hypograph(f).volume() == f.integral());
    CHECK(from_staircase(hypograph(f)).values == f.values);
  }
}

TEST_CASE("indicator convolution") {
  Grid g = Grid::uniform(1, 1.0 / 8, 8);
  GridFunction one{g, std::vector<double>(8, 1.0)};
  Convolution c = sup_convolve(one, one, spec_of(1, 0.5, {1, 0.6}));
  CHECK(c.integral == Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 0; i < c.h.values.size(); ++i)
    CHECK(c.h.values[i] == (c.h.grid.upper(0, i) <= 1.0 ? 1.0 : 0.0));
}

TEST_CASE("bridge to the set sum") {
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    std::size_t n = 1 + std::size_t(i % 2);
    GridFunction f = random_function(rng, n, 8), g = random_function(rng, n, 8);
    std::vector<double> al(n + 1, 0.0);
    for (auto& x : al) x = rng.uniform(0.2, 1);
    SumSpec s = spec_of(rng.uniform(1, 3), 0.5, al);
    Convolution c = sup_convolve(f, g, s);
    SumResult r = curvilinear_sum_grid(hypograph(f), hypograph(g), s);
    CHECK(c.integral == r.volume);
    CHECK(c.h.values == r.set.heights);
    CHECK(bbl_min_witness(f, g, s).h.values == c.h.values);
  }
}

TEST_CASE("convolution is monotone in its arguments") {
  Rng rng(3);
  GridFunction f = random_function(rng, 1, 8), g = random_function(rng, 1, 8);
  GridFunction f2 = f, g2 = g;
  for (auto& v : f2.values) v += 0.25;
  for (auto& v : g2.values) v *= 1.5;
  SumSpec s = spec_of(2, 0.4, {0.8, 0.5});
  Grid out = output_grid(hypograph(f2), hypograph(g2), s, {1.0 / 32});
  Convolution lo = sup_convolve(f, g, s, out), hi = sup_convolve(f2, g2, s, out);
  for (std::size_t i = 0; i < lo.h.values.size(); ++i) CHECK(lo.h.values[i] <= hi.h.values[i]);
}

TEST_CASE("marginals") {
  Grid g = Grid::uniform(2, 0.5, 2);
  GridFunction one{g, std::vector<double>(4, 1.0)};
  Marginal m = marginal(one, 1);
  CHECK(m.norm == 1.0);
  for (double v : m.values) CHECK(v == 1.0);

  // a(x) b(y) with a = (1, 3), b = (2, 5) on h = 0.5.
  GridFunction sep{g, {2, 5, 6, 15}};
  Marginal ms = marginal(sep, 1);
  CHECK(ms.values == std::vector<double>{4, 10});
  CHECK(ms.norm == 10);

  Marginal m0 = marginal(sep, 0);
  CHECK(m0.values == sep.values);
  CHECK(m0.norm == 15);
  CHECK(marginal(sep, 2).norm == sep.integral());
}
