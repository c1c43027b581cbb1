#pragma once

#include <cmath>

namespace curvilin {

// x -> x^alpha (log x for alpha = 0). Shared by the means and the grid kernels
// so that both evaluate [C T(a) + D T(b)] with identical rounding.
inline double power_transform(double x, double alpha) {
  if (alpha == 1.0) return x;
  if (alpha == 0.0) return std::log(x);
  return std::pow(x, alpha);
}

inline double power_inverse(double s, double alpha) {
  if (alpha == 1.0) return s;
  if (alpha == 0.0) return std::exp(s);
  return std::pow(s, 1.0 / alpha);
}

}  // namespace curvilin
