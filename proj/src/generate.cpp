#include <algorithm>
#include <cmath>

#include "curvilin/error.hpp"
#include "curvilin/verify.hpp"

namespace curvilin {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double snap(double x, double unit) { return std::round(x / unit) * unit; }

}  // namespace

std::uint64_t instance_seed(std::uint64_t base, const std::string& check, std::size_t index) {
  return splitmix(splitmix(base ^ fnv1a(check)) + index);
}

IntervalUnion random_interval_union(Rng& rng, int max_intervals, double range, double unit) {
  int k = rng.integer(1, max_intervals);
  IntervalUnion u;
  for (int i = 0; i < k; ++i) {
    double a = snap(rng.uniform(0, range), unit), b = snap(rng.uniform(0, range), unit);
    if (a > b) std::swap(a, b);
    if (b - a < unit) b = a + unit;
    u.intervals.emplace_back(a, b);
  }
  return normalize(std::move(u));
}

BoxUnion random_box_union(Rng& rng, int dim, int max_boxes, double range, double unit) {
  BoxUnion a;
  a.dim = dim;
  int k = rng.integer(1, max_boxes);
  for (int i = 0; i < k; ++i) {
    Box b;
    for (int d = 0; d < dim; ++d) {
      double lo = snap(rng.uniform(0, range - unit), unit);
      double hi = snap(rng.uniform(lo + unit, range), unit);
      if (hi <= lo) hi = lo + unit;
      b.lo.push_back(lo);
      b.hi.push_back(hi);
    }
    a.boxes.push_back(std::move(b));
  }
  return a;
}

StaircaseSet random_staircase(Rng& rng, std::size_t n, std::size_t cells, double h, double max_height, int levels,
                              double fill) {
  Grid g = Grid::uniform(n, h, cells);
  StaircaseSet s{g, std::vector<double>(g.cells(), 0.0)};
  auto draw = [&] {
    if (levels > 0) return max_height * double(rng.integer(1, levels)) / double(levels);
    return max_height * rng.uniform(0.05, 1.0);
  };
  bool any = false;
  for (auto& v : s.heights)
    if (rng.coin(fill)) {
      v = draw();
      any = true;
    }
  if (!any) s.heights[std::size_t(rng.integer(0, int(s.heights.size()) - 1))] = draw();
  return s;
}

StaircaseSet random_down_set(Rng& rng, std::size_t n, std::size_t cells, double h, double max_height) {
  Grid g = Grid::uniform(n, h, cells);
  StaircaseSet s{g, std::vector<double>(g.cells(), 0.0)};
  for (auto& v : s.heights) v = rng.coin(0.85) ? max_height * rng.uniform(0.05, 1.0) : 0.0;
  s.heights[0] = std::max(s.heights[0], 0.5 * max_height);
  for (std::size_t c = 0; c < s.heights.size(); ++c) {
    auto idx = g.unflatten(c);
    for (std::size_t i = 0; i < n; ++i)
      if (idx[i] > 0) {
        auto prev = idx;
        --prev[i];
        s.heights[c] = std::min(s.heights[c], s.heights[g.flatten(prev)]);
      }
  }
  return s;
}

StaircaseSet random_box_staircase(Rng& rng, std::size_t n, std::size_t cells, double h, double max_height) {
  Grid g = Grid::uniform(n, h, cells);
  StaircaseSet s{g, std::vector<double>(g.cells(), 0.0)};
  std::vector<std::size_t> extent(n);
  for (auto& e : extent) e = std::size_t(rng.integer(1, int(cells)));
  double height = max_height * double(rng.integer(1, 16)) / 16.0;
  for (std::size_t c = 0; c < s.heights.size(); ++c) {
    auto idx = g.unflatten(c);
    bool in = true;
    for (std::size_t i = 0; i < n; ++i) in = in && idx[i] < extent[i];
    if (in) s.heights[c] = height;
  }
  return s;
}

CellMask random_cell_mask(Rng& rng, const Grid& grid, double fill) {
  CellMask m{grid, std::vector<std::uint8_t>(grid.cells(), 0)};
  bool any = false;
  for (auto& v : m.inside)
    if (rng.coin(fill)) {
      v = 1;
      any = true;
    }
  if (!any) m.inside[std::size_t(rng.integer(0, int(m.inside.size()) - 1))] = 1;
  return m;
}

}  // namespace curvilin
