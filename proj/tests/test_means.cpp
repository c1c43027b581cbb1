#include <doctest.h>

#include <cmath>

#include "curvilin/error.hpp"
#include "curvilin/means.hpp"
#include "curvilin/verify.hpp"

using namespace curvilin;
using doctest::Approx;

TEST_CASE("conjugate exponent") {
  for (double p : {1.0, 1.25, 2.0, 3.0, 7.5}) {
    MeanParams m(p, 0.3, 0.6);
    CHECK(1.0 / p + m.inv_q() == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(MeanParams(1.0, 0.5, 0.5).q() == kInf);
}

TEST_CASE("p = 1 coefficients are the classical weights") {
  for (double lambda : {0.1, 0.5, 0.9}) {
    Coefficients c = lp_coefficients(MeanParams(1.0, 0.3, lambda));
    CHECK(c.C == 0.7);
    CHECK(c.D == 0.3);
  }
}

TEST_CASE("mean_p_alpha is lambda invariant at p = 1") {
  double ref = mean_p_alpha(2.0, 5.0, MeanParams(1.0, 0.3, 0.5), 0.7);
  for (double lambda : {0.01, 0.2, 0.77, 0.999}) CHECK(mean_p_alpha(2.0, 5.0, MeanParams(1.0, 0.3, lambda), 0.7) == ref);
}

TEST_CASE("zero convention and limit exponents") {
  CHECK(mean_alpha(0.0, 3.0, 0.5, 1.0) == 0.0);
  CHECK(mean_p_alpha(0.0, 3.0, MeanParams(2, 0.5, 0.5), -1.0) == 0.0);
  CHECK(mean_alpha(2.0, 8.0, 0.5, 0.0) == Approx(4.0).epsilon(1e-14));
  CHECK(mean_alpha(2.0, 8.0, 0.5, kInf) == 8.0);
  CHECK(mean_alpha(2.0, 8.0, 0.5, -kInf) == 2.0);
  CHECK(sup_mean_over_lambda(1.0, 0.0, 2.0, 0.5, 1.0) == 0.0);
}

TEST_CASE("optimal lambda closed form") {
  CHECK(optimal_lambda(3.0, 3.0, 2.0, 0.5, 0.4) == Approx(0.5).epsilon(1e-14));
  double l = optimal_lambda(2.0, 4.0, 2.0, 0.5, 1.0);
  CHECK(l == Approx(0.8).epsilon(1e-12));
  CHECK(mean_p_alpha(2.0, 4.0, MeanParams(2.0, 0.5, l), 1.0) == Approx(std::sqrt(10.0)).epsilon(1e-12));
  CHECK(sup_mean_over_lambda(2.0, 4.0, 2.0, 0.5, 1.0) == Approx(std::sqrt(10.0)).epsilon(1e-12));
  CHECK(sup_mean_over_lambda(1.0, 1.0, 2.0, 0.5, 1.0) == 1.0);
  CHECK_THROWS_AS(optimal_lambda(0.0, 1.0, 2.0, 0.5, 1.0), DomainError);
}

TEST_CASE("optimal lambda against a dense lambda scan") {
  // Brute-force maximizer on a step-1e-5 grid.
  Rng rng(7);
  for (int i = 0; i < 40; ++i) {
    double a = rng.uniform(0.2, 5), b = rng.uniform(0.2, 5), p = rng.uniform(1, 4), t = rng.uniform(0.1, 0.9),
           alpha = rng.uniform(0.05, 1);
    double best = 0, arg = 0;
    for (int k = 1; k < 100000; ++k) {
      double lambda = k * 1e-5;
      double v = mean_p_alpha(a, b, MeanParams(p, t, lambda), alpha);
      if (v > best) best = v, arg = lambda;
    }
    double ls = optimal_lambda(a, b, p, t, alpha);
    CHECK(std::abs(ls - arg) <= 2e-5);
    CHECK(mean_p_alpha(a, b, MeanParams(p, t, ls), alpha) >= best * (1 - 1e-12));
    CHECK(best == Approx(mean_alpha(a, b, t, p * alpha)).epsilon(1e-9));
  }
}

// With p > 1 the weights sum to at most 1, so monotonicity holds on alpha > 0
// only; at p = 1 it is the classical power-mean inequality on the whole line.
TEST_CASE("monotone in alpha") {
  Rng rng(11);
  for (int i = 0; i < 400; ++i) {
    double a = rng.uniform(0.1, 4), b = rng.uniform(0.1, 4);
    bool classical = i % 2 == 0;
    double p = classical ? 1.0 : rng.uniform(1, 3);
    MeanParams m(p, rng.uniform(0.1, 0.9), rng.uniform(0.05, 0.95));
    double lo = classical ? rng.uniform(-3, 2) : rng.uniform(0.01, 2);
    double hi = lo + rng.uniform(0, 2);
    CHECK(mean_p_alpha(a, b, m, lo) <= mean_p_alpha(a, b, m, hi) * (1 + 1e-14));
  }
}

TEST_CASE("holder bound examples") {
  HolderBound eq = holder_product_bound(1, 1, 1, 1, MeanParams(2, 0.5, 0.5), 2, 2);
  MeanParams half(2, 0.5, 0.5);
  CHECK(eq.lhs == Approx(half.M() * half.M()).epsilon(1e-12));
  CHECK(eq.branch == HolderBranch::sum_nonneg);

  MeanParams m(2, 0.4, 0.6);
  HolderBound pos = holder_product_bound(2, 3, 5, 7, m, 1, 1);
  CHECK(pos.branch == HolderBranch::sum_nonneg);
  CHECK(pos.lhs >= pos.rhs);
  CHECK(pos.rhs == Approx(mean_p_alpha(10, 21, m, 0.5)).epsilon(1e-14));

  HolderBound mixed = holder_product_bound(2, 3, 5, 7, m, 1, -2);
  CHECK(mixed.branch == HolderBranch::mixed_sign);
  Coefficients cd = lp_coefficients(m);
  CHECK(mixed.rhs == Approx(std::min(std::pow(cd.C, 0.5) * 10, std::pow(cd.D, 0.5) * 21)).epsilon(1e-14));
  CHECK(mixed.lhs >= mixed.rhs);

  CHECK_THROWS_AS(holder_product_bound(1, 2, 3, 4, m, -1, -1), DomainError);
}

// Exponents near 0- push (C + D)^{1/alpha} past the double range, so they stay
// at least 0.05 away from zero here.
TEST_CASE("holder fuzz") {
  Rng rng(5);
  auto exponent = [&] {
    double x = rng.uniform(0.05, 4);
    return rng.coin(0.5) ? -x : x;
  };
  for (int i = 0; i < 20000; ++i) {
    double alpha = exponent(), beta = exponent();
    if (alpha + beta < 0 && alpha * beta > 0) beta = -beta;
    double p = rng.uniform(1, 4), t = rng.uniform(0.05, 0.95), lambda = rng.uniform(0.05, 0.95);
    double a = rng.uniform(0.01, 10), b = rng.uniform(0.01, 10), c = rng.uniform(0.01, 10), d = rng.uniform(0.01, 10);
    HolderBound hb = holder_product_bound(a, b, c, d, MeanParams(p, t, lambda), alpha, beta);
    INFO(alpha, " ", beta, " ", p, " ", t, " ", lambda, " ", a, " ", b, " ", c, " ", d);
    CHECK(hb.lhs >= hb.rhs - 1e-12 * std::max(1.0, hb.rhs));
  }
}

TEST_CASE("min branch supremum") {
  double gamma = -0.5, a = 2, b = 3, p = 2, t = 0.4;
  double best = 0;
  for (int k = 1; k < 20000; ++k) {
    Coefficients cd = lp_coefficients(MeanParams(p, t, k / 20000.0));
    best = std::max(best, std::min(std::pow(cd.C, 1 / gamma) * a, std::pow(cd.D, 1 / gamma) * b));
  }
  CHECK(sup_min_branch(a, b, p, t, gamma) >= best * (1 - 1e-12));
  CHECK(sup_min_branch(a, b, p, t, gamma) == Approx(best).epsilon(1e-3));
}

TEST_CASE("power vector threshold and delta") {
  PowerVector v({1.0, 0.5, 0.25});
  CHECK(v.threshold() == Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(v.main_branch());
  CHECK_FALSE(PowerVector({1.0, 1.0, -0.6}).main_branch());
  CHECK(delta_exponent(1.0, 1.0, 1.0) == Approx(1.0 / 3.0).epsilon(1e-14));
  auto ls = uniform_lambdas(3);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == 0.25);
  CHECK(ls[2] == 0.75);
}
