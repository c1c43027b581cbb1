#pragma once

#include <optional>
#include <vector>

#include "curvilin/curvsum.hpp"
#include "curvilin/sets.hpp"

namespace curvilin {

// Nonnegative function, constant on each grid cell.
struct GridFunction {
  Grid grid;
  std::vector<double> values;

  double integral() const;
  double sup_norm() const;
};

StaircaseSet hypograph(const GridFunction& f);
GridFunction from_staircase(const StaircaseSet& s);

struct Convolution {
  GridFunction h;
  double integral = 0;  // exact for n = 1 (union area of the hypograph sum)
};

// Supremal convolution; values are the segment function of the curvilinear
// sum of the hypographs.
Convolution sup_convolve(const GridFunction& f, const GridFunction& g, const SumSpec& spec,
                         const std::optional<Grid>& out = std::nullopt);

// Smallest grid function meeting the domination condition on every sampled
// (x, y, lambda). Same values as sup_convolve.
Convolution bbl_min_witness(const GridFunction& f, const GridFunction& g, const SumSpec& spec,
                            const std::optional<Grid>& out = std::nullopt);

struct Marginal {
  Grid grid;  // over the complement of the first k axes
  std::vector<double> values;
  double norm = 0;
};

Marginal marginal(const GridFunction& f, int k);

}  // namespace curvilin
