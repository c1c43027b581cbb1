#pragma once

#include <optional>
#include <vector>

#include "curvilin/envelope.hpp"
#include "curvilin/means.hpp"
#include "curvilin/sets.hpp"

namespace curvilin {

enum class SumMode {
  curvilinear,
  quasi,           // every coordinate by min(C^{1/a} x, D^{1/a} y)
  quasi_vertical,  // base by means, vertical coordinate by the min rule
};

enum class CoefficientForm { with_t, t_free };

struct SumSpec {
  double p = 1.0;
  double t = 0.5;
  PowerVector alphas;
  int lambda_points = 64;
  SumMode mode = SumMode::curvilinear;
  CoefficientForm form = CoefficientForm::with_t;
  // Closed-form candidates added to the uniform grid (e.g. from the volume pair).
  std::vector<double> extra_lambdas;
  // Evaluate every height pair also at its own maximizing lambda.
  bool pair_lambdas = true;
  // Also evaluate every cell pair at the lambda maximizing each base coordinate of its far corner.
  bool corner_lambdas = false;
  // Output cells per input cell on grid paths.
  int refine = 4;

  Coefficients coefficients(double lambda) const;
  // Sorted, deduplicated lambdas; a single point when p = 1.
  std::vector<double> lambda_set() const;
  // lambda maximizing the vertical combination of (f, g), if it has an interior maximizer.
  std::optional<double> pair_lambda(double f, double g) const;
  std::optional<double> coordinate_lambda(double x, double y, std::size_t axis) const;
  bool lambda_free() const { return p == 1.0; }
};

void validate(const SumSpec& spec, std::size_t base_dims);

// Adds the lambda realizing the volume-level bound for the pair (va, vb).
void inject_volume_lambda(SumSpec& spec, double va, double vb);

struct SumResult {
  StaircaseSet set;   // lower Riemann projection on the output grid
  double volume = 0;  // exact union volume for n = 1, cell sum for n = 2
  Envelope envelope;  // n = 1 only
};

IntervalUnion curvilinear_sum_1d(const IntervalUnion& k, const IntervalUnion& l, const SumSpec& spec);

// Output grid: origin 0, spacing min input spacing / refine, covering the image.
SumResult curvilinear_sum_grid(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec,
                               const std::optional<Grid>& out = std::nullopt);
SumResult quasi_sum_grid(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec,
                         const std::optional<Grid>& out = std::nullopt);

// Grid with the given spacing and origin 0 covering the sum's image over every lambda the sum evaluates.
Grid output_grid(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec, const std::vector<double>& spacing);

// Sum of two non-compressed box unions (dim 2): exact union area of the images.
double curvilinear_sum_volume(const BoxUnion& a, const BoxUnion& b, const SumSpec& spec);

StaircaseSet scalar_dilate(const StaircaseSet& a, double c, double p, const PowerVector& alphas);
BoxUnion scalar_dilate(const BoxUnion& a, double c, double p, const PowerVector& alphas);

struct BaseSum {
  CellMask cells;
  double volume = 0;
};

// (1-t) ._p X +_p t ._p Y for cell sets; exact volume in 1-D.
BaseSum lp_minkowski_sum_base(const CellMask& x, const CellMask& y, double p, double t,
                              int lambda_points = 64, const std::optional<Grid>& out = std::nullopt);

// Brute-force reference: direct mean evaluations over the union of the spec's
// lambdas and a dense uniform grid (dense_points = 0 keeps the spec's lambdas only).
SumResult sum_oracle(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec,
                     int dense_points = 4096, const std::optional<Grid>& out = std::nullopt);
IntervalUnion sum_oracle_1d(const IntervalUnion& k, const IntervalUnion& l, const SumSpec& spec,
                            double cell, int dense_points = 4096);

}  // namespace curvilin
