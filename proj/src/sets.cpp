#include "curvilin/sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "curvilin/envelope.hpp"
#include "curvilin/error.hpp"

namespace curvilin {

void CompensatedSum::add(double x) {
  double s = sum + x;
  if (std::abs(sum) >= std::abs(x)) comp += (sum - s) + x;
  else comp += (x - s) + sum;
  sum = s;
}

double compensated_sum(const std::vector<double>& xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

double IntervalUnion::length() const {
  CompensatedSum acc;
  for (auto [lo, hi] : intervals) acc.add(hi - lo);
  return acc.value();
}

IntervalUnion normalize(IntervalUnion u) {
  auto& iv = u.intervals;
  std::erase_if(iv, [](const auto& x) { return !(x.second > x.first); });
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  for (auto& x : iv) {
    if (!out.empty() && x.first <= out.back().second) out.back().second = std::max(out.back().second, x.second);
    else out.push_back(x);
  }
  u.intervals = std::move(out);
  return u;
}

double volume(const IntervalUnion& u) { return normalize(u).length(); }

namespace {

void check_box_union(const BoxUnion& a) {
  if (a.dim != 2 && a.dim != 3) throw DomainError("box union dimension must be 2 or 3");
  for (const auto& b : a.boxes) {
    if (b.lo.size() != std::size_t(a.dim) || b.hi.size() != std::size_t(a.dim))
      throw DomainError("box coordinate count does not match dim");
    for (int i = 0; i < a.dim; ++i)
      if (!(b.lo[i] >= 0) || !(b.hi[i] > b.lo[i])) throw DomainError("box needs 0 <= lo < hi");
  }
}

}  // namespace

double volume(const BoxUnion& a) {
  check_box_union(a);
  if (a.boxes.empty()) return 0.0;
  if (a.dim == 2) {
    std::vector<Rect> r;
    for (const auto& b : a.boxes) r.push_back({b.lo[0], b.hi[0], b.lo[1], b.hi[1]});
    return union_area(r);
  }
  std::vector<double> xs;
  for (const auto& b : a.boxes) {
    xs.push_back(b.lo[0]);
    xs.push_back(b.hi[0]);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  CompensatedSum acc;
  for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
    std::vector<Rect> r;
    for (const auto& b : a.boxes)
      if (b.lo[0] <= xs[s] && b.hi[0] >= xs[s + 1]) r.push_back({b.lo[1], b.hi[1], b.lo[2], b.hi[2]});
    if (!r.empty()) acc.add((xs[s + 1] - xs[s]) * union_area(r));
  }
  return acc.value();
}

Grid::Grid(std::vector<double> origin_, std::vector<double> spacing_, std::vector<std::size_t> shape_)
    : origin(std::move(origin_)), spacing(std::move(spacing_)), shape(std::move(shape_)) {
  if (origin.size() != shape.size() || spacing.size() != shape.size())
    throw DomainError("grid origin, spacing and shape must have equal length");
  for (double h : spacing)
    if (!(h > 0) || !std::isfinite(h)) throw DomainError("grid spacing must be positive");
}

Grid Grid::uniform(std::size_t dims, double h, std::size_t cells_per_axis) {
  return Grid(std::vector<double>(dims, 0.0), std::vector<double>(dims, h),
              std::vector<std::size_t>(dims, cells_per_axis));
}

std::size_t Grid::cells() const {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

double Grid::cell_volume() const {
  double v = 1;
  for (double h : spacing) v *= h;
  return v;
}

std::vector<std::size_t> Grid::unflatten(std::size_t index) const {
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t a = shape.size(); a-- > 0;) {
    idx[a] = index % shape[a];
    index /= shape[a];
  }
  return idx;
}

std::size_t Grid::flatten(const std::vector<std::size_t>& idx) const {
  std::size_t f = 0;
  for (std::size_t a = 0; a < shape.size(); ++a) f = f * shape[a] + idx[a];
  return f;
}

double Grid::min_spacing() const {
  double m = __builtin_inf();
  for (double h : spacing) m = std::min(m, h);
  return m;
}

double StaircaseSet::volume() const {
  return grid.cell_volume() * compensated_sum(heights);
}

double StaircaseSet::max_height() const {
  double m = 0;
  for (double h : heights) m = std::max(m, h);
  return m;
}

double StaircaseSet::max_coordinate(std::size_t axis) const {
  double m = 0;
  for (std::size_t c = 0; c < heights.size(); ++c)
    if (heights[c] > 0) m = std::max(m, grid.upper(axis, grid.unflatten(c)[axis]));
  return m;
}

bool StaircaseSet::empty() const {
  return std::none_of(heights.begin(), heights.end(), [](double h) { return h > 0; });
}

double CellMask::volume() const { return grid.cell_volume() * double(count()); }

std::size_t CellMask::count() const {
  return std::size_t(std::count_if(inside.begin(), inside.end(), [](auto v) { return v != 0; }));
}

namespace {

bool is_multiple(double x, double h) {
  double r = x / h;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, std::abs(r));
}

}  // namespace

Grid aligned_base_grid(const BoxUnion& a) {
  check_box_union(a);
  std::size_t n = std::size_t(a.dim - 1);
  std::vector<double> coords;
  for (const auto& b : a.boxes)
    for (std::size_t i = 0; i < n; ++i) {
      coords.push_back(b.lo[i]);
      coords.push_back(b.hi[i]);
    }
  double h = 1.0;
  for (int e = 0; e <= 30; ++e, h *= 0.5) {
    if (std::all_of(coords.begin(), coords.end(), [&](double x) { return is_multiple(x, h); })) {
      std::vector<std::size_t> shape(n, 1);
      for (const auto& b : a.boxes)
        for (std::size_t i = 0; i < n; ++i)
          shape[i] = std::max(shape[i], std::size_t(std::llround(b.hi[i] / h)));
      return Grid(std::vector<double>(n, 0.0), std::vector<double>(n, h), shape);
    }
  }
  throw ResolutionError("box edges are not aligned to any dyadic grid; supply a base grid");
}

StaircaseSet compress(const BoxUnion& a, const std::optional<Grid>& base) {
  Grid g = base ? *base : aligned_base_grid(a);
  std::size_t n = std::size_t(a.dim - 1);
  if (g.dims() != n) throw DomainError("base grid dimension must be dim - 1");
  // Cell index ranges covered by each box, after checking edge alignment.
  struct Span {
    std::vector<std::size_t> first, last;
    double lo, hi;
  };
  std::vector<Span> spans;
  for (const auto& b : a.boxes) {
    Span sp{{}, {}, b.lo[n], b.hi[n]};
    for (std::size_t i = 0; i < n; ++i) {
      double f = (b.lo[i] - g.origin[i]) / g.spacing[i];
      double l = (b.hi[i] - g.origin[i]) / g.spacing[i];
      if (!is_multiple(b.lo[i] - g.origin[i], g.spacing[i]) ||
          !is_multiple(b.hi[i] - g.origin[i], g.spacing[i]) || f < -1e-9 ||
          l > double(g.shape[i]) + 1e-9)
        throw ResolutionError("box edge at axis " + std::to_string(i) +
                              " does not align with the base grid; refine the grid to the box edges");
      sp.first.push_back(std::size_t(std::llround(f)));
      sp.last.push_back(std::size_t(std::llround(l)));
    }
    spans.push_back(std::move(sp));
  }
  StaircaseSet s{g, std::vector<double>(g.cells(), 0.0)};
  for (std::size_t c = 0; c < g.cells(); ++c) {
    auto idx = g.unflatten(c);
    IntervalUnion fiber;
    for (const auto& sp : spans) {
      bool in = true;
      for (std::size_t i = 0; i < n && in; ++i) in = idx[i] >= sp.first[i] && idx[i] < sp.last[i];
      if (in) fiber.intervals.emplace_back(sp.lo, sp.hi);
    }
    s.heights[c] = volume(fiber);
  }
  return s;
}

BoxUnion realize(const StaircaseSet& s) {
  std::size_t n = s.base_dims();
  BoxUnion out;
  out.dim = int(n + 1);
  for (std::size_t c = 0; c < s.heights.size(); ++c) {
    if (!(s.heights[c] > 0)) continue;
    auto idx = s.grid.unflatten(c);
    Box b;
    for (std::size_t i = 0; i < n; ++i) {
      b.lo.push_back(s.grid.lower(i, idx[i]));
      b.hi.push_back(s.grid.upper(i, idx[i]));
    }
    b.lo.push_back(0.0);
    b.hi.push_back(s.heights[c]);
    out.boxes.push_back(std::move(b));
  }
  return out;
}

SectionProfile section_profile(const StaircaseSet& s, int k) {
  std::size_t n = s.base_dims();
  if (k < 0 || std::size_t(k) > n) throw DomainError("section subspace index k must lie in [0, n]");
  SectionProfile prof;
  prof.k = k;
  std::vector<double> origin, spacing;
  std::vector<std::size_t> shape;
  double hk = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < std::size_t(k)) hk *= s.grid.spacing[i];
    else {
      origin.push_back(s.grid.origin[i]);
      spacing.push_back(s.grid.spacing[i]);
      shape.push_back(s.grid.shape[i]);
    }
  }
  prof.grid = Grid(origin, spacing, shape);
  std::size_t m = prof.grid.cells();
  std::vector<CompensatedSum> acc(m);
  // Row-major with H axes leading: the H-perp index is the trailing part.
  for (std::size_t c = 0; c < s.heights.size(); ++c) acc[c % m].add(s.heights[c]);
  prof.values.resize(m);
  for (std::size_t u = 0; u < m; ++u) {
    prof.values[u] = hk * acc[u].value();
    prof.sup_norm = std::max(prof.sup_norm, prof.values[u]);
  }
  return prof;
}

SectionProfile section_profile(const BoxUnion& a, int k) { return section_profile(compress(a), k); }

CellMask superlevel(const SectionProfile& profile, double r) {
  if (!(profile.sup_norm > 0)) throw DegenerateError("super-level set of a zero profile");
  if (!(r >= 0 && r <= 1)) throw DomainError("super-level threshold must lie in [0,1]");
  CellMask m{profile.grid, std::vector<std::uint8_t>(profile.values.size(), 0)};
  double thr = r * profile.sup_norm;
  for (std::size_t u = 0; u < profile.values.size(); ++u)
    m.inside[u] = profile.values[u] > 0 && profile.values[u] >= thr;
  return m;
}

StaircaseSet as_staircase(const SectionProfile& profile) {
  return StaircaseSet{profile.grid, profile.values};
}

StaircaseSet normalized_compression(const StaircaseSet& s, int k) {
  auto prof = section_profile(s, k);
  if (!(prof.sup_norm > 0)) throw DegenerateError("normalized compression of an empty set");
  StaircaseSet out{prof.grid, prof.values};
  for (auto& h : out.heights) h /= prof.sup_norm;
  return out;
}

StaircaseSet indicator(const CellMask& m) {
  StaircaseSet s{m.grid, std::vector<double>(m.inside.size(), 0.0)};
  for (std::size_t c = 0; c < m.inside.size(); ++c) s.heights[c] = m.inside[c] ? 1.0 : 0.0;
  return s;
}

StaircaseSet subdivide(const StaircaseSet& s, std::size_t factor) {
  if (factor <= 1) return s;
  std::size_t n = s.base_dims();
  std::vector<double> spacing = s.grid.spacing;
  std::vector<std::size_t> shape = s.grid.shape;
  for (std::size_t i = 0; i < n; ++i) {
    spacing[i] /= double(factor);
    shape[i] *= factor;
  }
  Grid g(s.grid.origin, spacing, shape);
  StaircaseSet out{g, std::vector<double>(g.cells(), 0.0)};
  for (std::size_t c = 0; c < out.heights.size(); ++c) {
    auto idx = g.unflatten(c);
    for (auto& v : idx) v /= factor;
    out.heights[c] = s.heights[s.grid.flatten(idx)];
  }
  return out;
}

}  // namespace curvilin
