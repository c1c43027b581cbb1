#pragma once

#include <span>
#include <utility>
#include <vector>

namespace curvilin {

inline constexpr double kInf = __builtin_inf();

struct MeanParams {
  double p = 1.0;
  double t = 0.5;
  double lambda = 0.5;

  MeanParams() = default;
  MeanParams(double p_, double t_, double lambda_);

  // 1/q with 1/inf := 0; negative when p < 1.
  double inv_q() const { return 1.0 - 1.0 / p; }
  double q() const;
  double C() const;
  double D() const;
  double M() const { return C() + D(); }
  double theta() const { return D() / M(); }
};

struct Coefficients {
  double C;
  double D;
};

Coefficients lp_coefficients(const MeanParams& params);
// ((1-lambda)^{1/q}, lambda^{1/q}).
Coefficients t_free_coefficients(double p, double lambda);

double mean_alpha(double a, double b, double t, double alpha);

// [C a^alpha + D b^alpha]^{1/alpha} with the zero convention (0 if ab = 0).
double mean_p_alpha(double a, double b, Coefficients cd, double alpha);
double mean_p_alpha(double a, double b, const MeanParams& params, double alpha);

// Same combination without the zero convention: the continuous extension used
// for images of coordinate intervals. Shares its arithmetic with the grid
// kernels so both paths round identically.
double combine_power(double a, double b, Coefficients cd, double alpha);

double optimal_lambda(double a, double b, double p, double t, double alpha);
double sup_mean_over_lambda(double a, double b, double p, double t, double alpha);

// Max of mean_p_alpha over the given lambdas; returns (value, index).
std::pair<double, std::size_t> grid_sup_mean(double a, double b, double p, double t,
                                             double alpha, std::span<const double> lambdas);

enum class HolderBranch { sum_nonneg, mixed_sign };

struct HolderBound {
  double lhs;
  double rhs;
  HolderBranch branch;
};

HolderBound holder_product_bound(double a, double b, double c, double d,
                                 const MeanParams& params, double alpha, double beta);

// sup over lambda of min(C^{1/gamma} a, D^{1/gamma} b); the crossing is found by bisection.
double sup_min_branch(double a, double b, double p, double t, double gamma);
double min_branch_lambda(double a, double b, double p, double t, double gamma);

struct PowerVector {
  std::vector<double> alphas;

  PowerVector() = default;
  explicit PowerVector(std::vector<double> a) : alphas(std::move(a)) {}

  std::size_t size() const { return alphas.size(); }
  std::size_t base_dims() const { return alphas.size() - 1; }
  double vertical() const { return alphas.back(); }
  double gamma() const;
  // (sum_{i<=n} alpha_i^{-1})^{-1} negated: the branch threshold for alpha_{n+1}.
  double threshold() const;
  bool main_branch() const { return vertical() >= threshold(); }
};

double delta_exponent(double alpha, double beta, double k);
inline double omega_exponent(double alpha, double beta, double n) {
  return delta_exponent(alpha, beta, n);
}

// k/(L+1), k = 1..L.
std::vector<double> uniform_lambdas(int points);

}  // namespace curvilin
