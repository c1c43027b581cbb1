#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "curvilin/curvsum.hpp"
#include "curvilin/envelope.hpp"
#include "curvilin/funcs.hpp"
#include "curvilin/report.hpp"
#include "curvilin/sets.hpp"

namespace curvilin {

using DensityFn = std::function<double(std::span<const double>)>;

// d mu = phi dx on a box; the grid holds phi at cell midpoints.
struct DensityMeasure {
  GridFunction density;
  DensityFn phi;
  std::optional<double> alpha;  // declared: phi is alpha-concave on its support
  bool lebesgue = false;
};

DensityMeasure lebesgue_measure(const Grid& box);
DensityMeasure density_from(const Grid& box, DensityFn phi, std::optional<double> alpha);
// Indicator of a box inside the grid; +inf-concave.
DensityMeasure convex_indicator_density(const Grid& box, const Box& support);
// (1 - |x|_1 / radius)_+ ; 1-concave.
DensityMeasure affine_density(const Grid& box, double radius);
// exp(-|x - center|^2 / (2 sigma^2)); log-concave.
DensityMeasure gaussian_density(const Grid& box, std::vector<double> center, double sigma);

// Samples the declared alpha-concavity; returns the worst violation found (<= 0 is fine).
double concavity_violation(const DensityMeasure& mu, std::uint64_t seed, int samples = 2000);

double measure_of(const CellMask& a, const DensityMeasure& mu);
// mu lives on the (n+1)-dimensional box containing the set.
double measure_of(const StaircaseSet& a, const DensityMeasure& mu);
double measure_of(const Envelope& e, const DensityMeasure& mu);

struct SectionMeasure {
  Grid grid;  // complement of the first k axes
  std::vector<double> values;
  double sup = 0;
  // { u : values(u) >= r sup }.
  CellMask level(double r) const;
  // Layer-cake integral sup * int_0^1 |level(r)| dr, exact over the breakpoints.
  double layer_cake() const;
};

SectionMeasure mu_section_quantities(const CellMask& a, const DensityMeasure& mu, int k);

struct FSpec {
  enum class Kind { power, log, linear };
  Kind kind = Kind::linear;
  double a = 1;  // exponent for power, slope for linear
  double b = 0;  // intercept for linear

  static FSpec power(double s) { return {Kind::power, s, 0}; }
  static FSpec logarithm() { return {Kind::log, 1, 0}; }
  static FSpec linear(double slope, double intercept) { return {Kind::linear, slope, intercept}; }

  double forward(double x) const;
  double inverse(double y) const;
  double derivative(double x) const;
};

enum class Trend { monotone, oscillating };

struct SurfaceEstimate {
  std::vector<std::pair<double, double>> quotients;  // (eps, quotient), eps decreasing
  double estimate = 0;
  Trend trend = Trend::monotone;
  bool within_band = true;  // last three quotients within 20% of each other
};

struct SurfaceOptions {
  std::vector<double> eps = {0x1p-4, 0x1p-5, 0x1p-6, 0x1p-7, 0x1p-8, 0x1p-9, 0x1p-10};
  int lambda_points = 64;
  int refine = 4;
};

SurfaceEstimate summarize_quotients(std::vector<std::pair<double, double>> q);

// liminf of (mu(A (+) eps x B) - mu(A)) / eps with the t-free sum.
SurfaceEstimate surface_area_sets(const StaircaseSet& a, const StaircaseSet& b, const DensityMeasure& mu,
                                  double p, const PowerVector& alphas, const SurfaceOptions& opt = {});
SurfaceEstimate surface_area_funcs(const GridFunction& f, const GridFunction& g, const DensityMeasure& mu,
                                   double p, const PowerVector& alphas, const SurfaceOptions& opt = {});

// mu(A (+) eps x B) for one eps.
double perturbed_measure(const StaircaseSet& a, const StaircaseSet& b, const DensityMeasure& mu, double eps,
                         double p, const PowerVector& alphas, const SurfaceOptions& opt = {});

// Left quotients (mu(A) - mu((1 - d) x A)) / d.
SurfaceEstimate dilation_derivative(const StaircaseSet& a, const DensityMeasure& mu, double p,
                                    const PowerVector& alphas, const SurfaceOptions& opt = {});

// min over t of mu(sum_t) - F^{-1}((1-t) F(mu A) + t F(mu B)).
Report f_concavity_check(const StaircaseSet& a, const StaircaseSet& b, const DensityMeasure& mu, const FSpec& F,
                         const SumSpec& spec, const std::vector<double>& t_samples);
Report f_concavity_check(const GridFunction& f, const GridFunction& g, const DensityMeasure& mu, const FSpec& F,
                         const SumSpec& spec, const std::vector<double>& t_samples);

// S(A,B) >= S(A,A) + (F(mu B) - F(mu A)) / F'(mu A).
Report minkowski_first_check(const StaircaseSet& a, const StaircaseSet& b, const DensityMeasure& mu, const FSpec& F,
                             double p, const PowerVector& alphas, const SurfaceOptions& opt = {});

struct MixedVolume {
  double V = 0;
  double M = 0;
  SurfaceEstimate surface;
  SurfaceEstimate derivative;
};

MixedVolume mixed_volume_quantities(const StaircaseSet& a, const StaircaseSet& b, const DensityMeasure& mu,
                                    const FSpec& F, double p, const PowerVector& alphas,
                                    const SurfaceOptions& opt = {});

}  // namespace curvilin
