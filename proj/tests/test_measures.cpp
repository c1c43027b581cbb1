#include <doctest.h>

#include <cmath>

#include "curvilin/measures.hpp"
#include "curvilin/verify.hpp"

using namespace curvilin;
using doctest::Approx;

TEST_CASE("lebesgue measure matches volumes") {
  Rng rng(1);
  Grid box = Grid::uniform(2, 1.0 / 32, 64);
  DensityMeasure leb = lebesgue_measure(box);
  for (int i = 0; i < 5; ++i) {
    StaircaseSet s = random_staircase(rng, 1, 16, 1.0 / 16, 1.0, 8, 0.8);
    CHECK(measure_of(s, leb) == Approx(s.volume()).epsilon(1e-12));
  }
  CellMask empty{box, std::vector<std::uint8_t>(box.cells(), 0)};
  CHECK(measure_of(empty, leb) == 0.0);
}

TEST_CASE("linear density integral") {
  Grid g = Grid::uniform(1, 1.0 / 64, 64);
  DensityMeasure mu = density_from(g, [](std::span<const double> x) { return x[0]; }, 1.0);
  CellMask all{g, std::vector<std::uint8_t>(64, 1)};
  CHECK(std::abs(measure_of(all, mu) - 0.5) <= 1.0 / (64.0 * 64.0));
}

TEST_CASE("declared concavity holds on the built-in densities") {
  Grid g = Grid::uniform(2, 1.0 / 16, 16);
  CHECK(concavity_violation(affine_density(g, 1.5), 1) <= 1e-9);
  CHECK(concavity_violation(gaussian_density(g, {0.5, 0.5}, 0.3), 2) <= 1e-9);
  CHECK(concavity_violation(convex_indicator_density(g, Box{{0.25, 0.25}, {0.75, 0.75}}), 3) <= 1e-9);
  // A bump declared 1-concave that is not.
  DensityMeasure bad = density_from(g, [](std::span<const double> x) { return x[0] < 0.5 ? 1.0 : 0.1; }, 1.0);
  CHECK(concavity_violation(bad, 4) > 0);
}

TEST_CASE("section measures and layer cake") {
  Rng rng(6);
  Grid g = Grid::uniform(2, 1.0 / 16, 16);
  DensityMeasure mu = gaussian_density(g, {0.3, 0.6}, 0.4);
  for (int i = 0; i < 8; ++i) {
    CellMask a = random_cell_mask(rng, g, 0.6);
    if (a.count() == 0) continue;
    for (int k : {0, 1, 2}) {
      SectionMeasure s = mu_section_quantities(a, mu, k);
      CHECK(s.layer_cake() == Approx(measure_of(a, mu)).epsilon(1e-12));
    }
  }
}

TEST_CASE("lebesgue sections reduce to profiles") {
  Grid g = Grid::uniform(2, 0.25, 4);
  CellMask a{g, std::vector<std::uint8_t>(16, 0)};
  for (std::size_t i : {0u, 1u, 4u, 5u, 6u}) a.inside[i] = 1;
  SectionMeasure s = mu_section_quantities(a, lebesgue_measure(g), 1);
  // Columns along the second axis: lengths over the first.
  CHECK(s.values == std::vector<double>{0.5, 0.5, 0.25, 0});
  CHECK(s.level(1.0).inside == std::vector<std::uint8_t>{1, 1, 0, 0});
}

TEST_CASE("F family") {
  for (FSpec f : {FSpec::power(0.5), FSpec::power(3.0), FSpec::logarithm(), FSpec::linear(2.0, -1.0)})
    for (double x : {0.2, 1.0, 3.5}) {
      CHECK(f.inverse(f.forward(x)) == Approx(x).epsilon(1e-10));
      double h = 1e-6 * x;
      CHECK(f.derivative(x) == Approx((f.forward(x + h) - f.forward(x - h)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("surface area of the unit square") {
  Grid g = Grid::uniform(1, 1.0 / 8, 8);
  StaircaseSet sq{g, std::vector<double>(8, 1.0)};
  for (double p : {1.0, 2.0, 3.0}) {
    SurfaceEstimate e = surface_area_sets(sq, sq, lebesgue_measure(g), p, PowerVector({1, 1}));
    CHECK(e.estimate == Approx(2.0 / p).epsilon(0.02));
    GridFunction one{g, std::vector<double>(8, 1.0)};
    CHECK(surface_area_funcs(one, one, lebesgue_measure(g), p, PowerVector({1, 1})).estimate == e.estimate);
  }
  GridFunction zero{g, std::vector<double>(8, 0.0)}, one{g, std::vector<double>(8, 1.0)};
  CHECK(surface_area_funcs(one, zero, lebesgue_measure(g), 2.0, PowerVector({1, 1})).estimate == 0.0);
}

TEST_CASE("cube dilation derivative") {
  Grid g = Grid::uniform(1, 0.25, 4);
  StaircaseSet sq{g, std::vector<double>(4, 1.0)};
  SurfaceEstimate d = dilation_derivative(sq, lebesgue_measure(g), 2.0, PowerVector({1, 1}));
  CHECK(d.estimate == Approx(1.0).epsilon(0.01));
}

TEST_CASE("minkowski first with A = B is tight") {
  Rng rng(9);
  StaircaseSet a = random_down_set(rng, 1, 8, 0.125, 1.0);
  Report r = minkowski_first_check(a, a, lebesgue_measure(a.grid), FSpec::power(0.5), 2.0, PowerVector({1, 1}));
  CHECK(std::abs(r.slack) <= 1e-12);
}

TEST_CASE("F-concavity of lebesgue volume") {
  Rng rng(10);
  for (int i = 0; i < 5; ++i) {
    StaircaseSet a = random_staircase(rng, 1, 8, 0.125, 1.0, 8, 0.8), b = random_staircase(rng, 1, 8, 0.125, 1.0, 8, 0.8);
    SumSpec s;
    s.p = 2;
    s.alphas = PowerVector({1, 0.5});
    Grid box = Grid::uniform(2, 1.0 / 32, 64);
    Report r = f_concavity_check(a, b, lebesgue_measure(box), FSpec::power(s.p * s.alphas.gamma()), s,
                                 {0.25, 0.5, 0.75});
    CHECK(r.verdict == Verdict::pass);
  }
}
