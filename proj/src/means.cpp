#include "curvilin/means.hpp"

#include <algorithm>
#include <cmath>

#include "curvilin/error.hpp"
#include "curvilin/power.hpp"
#include "curvilin/simd.hpp"

namespace curvilin {

MeanParams::MeanParams(double p_, double t_, double lambda_) : p(p_), t(t_), lambda(lambda_) {
  if (!(p > 0)) throw DomainError("p must be positive");
  if (!(t > 0 && t < 1)) throw DomainError("t must lie in (0,1)");
  if (!(lambda > 0 && lambda < 1)) throw DomainError("lambda must lie in (0,1)");
}

double MeanParams::q() const { return p == 1.0 ? kInf : p / (p - 1.0); }
double MeanParams::C() const { return lp_coefficients(*this).C; }
double MeanParams::D() const { return lp_coefficients(*this).D; }

Coefficients lp_coefficients(const MeanParams& mp) {
  if (!(mp.p > 0)) throw DomainError("p must be positive");
  if (!(mp.t > 0 && mp.t < 1) || !(mp.lambda > 0 && mp.lambda < 1))
    throw DomainError("t and lambda must lie in (0,1)");
  double iq = mp.inv_q();
  double ip = 1.0 / mp.p;
  double c = std::pow(1.0 - mp.t, ip);
  double d = std::pow(mp.t, ip);
  if (iq != 0.0) {
    c *= std::pow(1.0 - mp.lambda, iq);
    d *= std::pow(mp.lambda, iq);
  }
  return {c, d};
}

Coefficients t_free_coefficients(double p, double lambda) {
  if (!(p > 0)) throw DomainError("p must be positive");
  if (!(lambda > 0 && lambda < 1)) throw DomainError("lambda must lie in (0,1)");
  double iq = 1.0 - 1.0 / p;
  if (iq == 0.0) return {1.0, 1.0};
  return {std::pow(1.0 - lambda, iq), std::pow(lambda, iq)};
}

double mean_alpha(double a, double b, double t, double alpha) {
  if (a <= 0 || b <= 0) return 0.0;
  if (alpha == kInf) return std::max(a, b);
  if (alpha == -kInf) return std::min(a, b);
  if (alpha == 0.0) return std::pow(a, 1.0 - t) * std::pow(b, t);
  return std::pow((1.0 - t) * std::pow(a, alpha) + t * std::pow(b, alpha), 1.0 / alpha);
}

double combine_power(double a, double b, Coefficients cd, double alpha) {
  if (alpha == kInf) return std::max(a, b);
  if (alpha == -kInf) return std::min(a, b);
  return power_inverse(cd.C * power_transform(a, alpha) + cd.D * power_transform(b, alpha),
                       alpha);
}

double mean_p_alpha(double a, double b, Coefficients cd, double alpha) {
  if (a <= 0 || b <= 0) return 0.0;
  double r = combine_power(a, b, cd, alpha);
  if (std::isfinite(r) && r > 0) return r;
  // Large |alpha| under- or overflows a^alpha; rescale by the dominant argument.
  double m = alpha > 0 ? std::max(a, b) : std::min(a, b);
  return m * std::pow(cd.C * std::pow(a / m, alpha) + cd.D * std::pow(b / m, alpha), 1.0 / alpha);
}

double mean_p_alpha(double a, double b, const MeanParams& params, double alpha) {
  return mean_p_alpha(a, b, lp_coefficients(params), alpha);
}

double optimal_lambda(double a, double b, double p, double t, double alpha) {
  if (!(a > 0) || !(b > 0)) throw DomainError("optimal_lambda needs a, b > 0");
  if (alpha == 0.0 || std::isinf(alpha)) throw DomainError("optimal_lambda needs finite nonzero alpha");
  if (!(t > 0 && t < 1)) throw DomainError("t must lie in (0,1)");
  // Ratio form avoids overflow of a^{p alpha} for large exponents.
  double r = std::pow(a / b, p * alpha);
  return t / ((1.0 - t) * r + t);
}

double sup_mean_over_lambda(double a, double b, double p, double t, double alpha) {
  return mean_alpha(a, b, t, p * alpha);
}

std::pair<double, std::size_t> grid_sup_mean(double a, double b, double p, double t,
                                             double alpha, std::span<const double> lambdas) {
  const std::size_t n = lambdas.size();
  if (n == 0) throw DomainError("empty lambda grid");
  if (a <= 0 || b <= 0) return {0.0, 0};
  if (std::isinf(alpha)) return {alpha > 0 ? std::max(a, b) : std::min(a, b), 0};
  std::vector<double> c(n), d(n), inner(n);
  for (std::size_t k = 0; k < n; ++k) {
    Coefficients cd = lp_coefficients(MeanParams(p, t, lambdas[k]));
    c[k] = cd.C;
    d[k] = cd.D;
  }
  const auto& kern = simd::active();
  double ta = power_transform(a, alpha), tb = power_transform(b, alpha);
  kern.lincomb(c.data(), ta, d.data(), tb, inner.data(), n);
  // The inverse transform is decreasing for alpha < 0.
  if (alpha < 0)
    for (auto& v : inner) v = -v;
  std::size_t k = kern.argmax(inner.data(), n);
  double key = alpha < 0 ? -inner[k] : inner[k];
  return {power_inverse(key, alpha), k};
}

HolderBound holder_product_bound(double a, double b, double c, double d,
                                 const MeanParams& params, double alpha, double beta) {
  auto recip = [](double x) { return std::isinf(x) ? 0.0 : 1.0 / x; };
  Coefficients cd = lp_coefficients(params);
  double lhs = mean_p_alpha(a, b, cd, alpha) * mean_p_alpha(c, d, cd, beta);
  if (alpha + beta >= 0) {
    double s = recip(alpha) + recip(beta);
    double gamma;
    if (alpha == 0.0 || beta == 0.0) gamma = 0.0;
    else if (s == 0.0) gamma = (alpha * beta < 0) ? -kInf : kInf;
    else gamma = 1.0 / s;
    return {lhs, mean_p_alpha(a * c, b * d, cd, gamma), HolderBranch::sum_nonneg};
  }
  if (alpha * beta < 0) {
    double gamma = alpha * beta / (alpha + beta);
    double rhs = std::min(std::pow(cd.C, 1.0 / gamma) * (a * c),
                          std::pow(cd.D, 1.0 / gamma) * (b * d));
    return {lhs, rhs, HolderBranch::mixed_sign};
  }
  throw DomainError("holder_product_bound: alpha + beta < 0 with alpha * beta > 0");
}

namespace {

double min_branch_value(double a, double b, double p, double t, double gamma, double lambda) {
  Coefficients cd = lp_coefficients(MeanParams(p, t, lambda));
  return std::min(std::pow(cd.C, 1.0 / gamma) * a, std::pow(cd.D, 1.0 / gamma) * b);
}

}  // namespace

double min_branch_lambda(double a, double b, double p, double t, double gamma) {
  if (!(a > 0) || !(b > 0)) throw DomainError("min_branch_lambda needs a, b > 0");
  auto gap = [&](double lam) {
    Coefficients cd = lp_coefficients(MeanParams(p, t, lam));
    return std::pow(cd.C, 1.0 / gamma) * a - std::pow(cd.D, 1.0 / gamma) * b;
  };
  double lo = 1e-12, hi = 1.0 - 1e-12;
  double glo = gap(lo), ghi = gap(hi);
  if ((glo > 0) == (ghi > 0)) {
    // No crossing: the min is monotone in lambda, the sup sits at an end.
    return min_branch_value(a, b, p, t, gamma, lo) >= min_branch_value(a, b, p, t, gamma, hi)
               ? lo
               : hi;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = 0.5 * (lo + hi);
    if ((gap(mid) > 0) == (glo > 0)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double sup_min_branch(double a, double b, double p, double t, double gamma) {
  if (a <= 0 || b <= 0) return 0.0;
  if (p == 1.0)
    return std::min(std::pow(1.0 - t, 1.0 / gamma) * a, std::pow(t, 1.0 / gamma) * b);
  return min_branch_value(a, b, p, t, gamma, min_branch_lambda(a, b, p, t, gamma));
}

double PowerVector::gamma() const {
  double s = 0;
  for (double a : alphas) {
    if (a == 0.0) return 0.0;
    if (!std::isinf(a)) s += 1.0 / a;
  }
  return 1.0 / s;
}

double PowerVector::threshold() const {
  double s = 0;
  for (std::size_t i = 0; i + 1 < alphas.size(); ++i) {
    if (alphas[i] == 0.0) return 0.0;
    if (!std::isinf(alphas[i])) s += 1.0 / alphas[i];
  }
  return -1.0 / s;
}

double delta_exponent(double alpha, double beta, double k) {
  auto recip = [](double x) { return std::isinf(x) ? 0.0 : 1.0 / x; };
  return 1.0 / (recip(alpha) + recip(beta) + k);
}

std::vector<double> uniform_lambdas(int points) {
  if (points < 1) throw DomainError("lambda grid needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int k = 1; k <= points; ++k) out[static_cast<std::size_t>(k - 1)] = double(k) / double(points + 1);
  return out;
}

}  // namespace curvilin
