#include "curvilin/funcs.hpp"

#include <algorithm>

#include "curvilin/error.hpp"

namespace curvilin {

double GridFunction::integral() const { return hypograph(*this).volume(); }

double GridFunction::sup_norm() const {
  double m = 0;
  for (double v : values) m = std::max(m, v);
  return m;
}

StaircaseSet hypograph(const GridFunction& f) {
  if (f.values.size() != f.grid.cells()) throw DomainError("function values do not match its grid");
  for (double v : f.values)
    if (!(v >= 0)) throw DomainError("grid functions must be nonnegative");
  return StaircaseSet{f.grid, f.values};
}

GridFunction from_staircase(const StaircaseSet& s) { return GridFunction{s.grid, s.heights}; }

Convolution sup_convolve(const GridFunction& f, const GridFunction& g, const SumSpec& spec,
                         const std::optional<Grid>& out) {
  SumResult r = curvilinear_sum_grid(hypograph(f), hypograph(g), spec, out);
  return {from_staircase(r.set), r.volume};
}

Convolution bbl_min_witness(const GridFunction& f, const GridFunction& g, const SumSpec& spec,
                            const std::optional<Grid>& out) {
  return sup_convolve(f, g, spec, out);
}

Marginal marginal(const GridFunction& f, int k) {
  SectionProfile prof = section_profile(hypograph(f), k);
  return {prof.grid, prof.values, prof.sup_norm};
}

}  // namespace curvilin
