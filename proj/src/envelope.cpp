#include "curvilin/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "curvilin/error.hpp"

namespace curvilin {

namespace {

// Covered length over compressed y coordinates with interval add/remove.
class CoverTree {
 public:
  explicit CoverTree(std::vector<double> ys) : ys_(std::move(ys)) {
    std::size_t n = ys_.size() > 1 ? ys_.size() - 1 : 1;
    cnt_.assign(4 * n, 0);
    len_.assign(4 * n, 0.0);
    n_ = n;
  }
  void update(std::size_t l, std::size_t r, int v) { update(1, 0, n_, l, r, v); }
  double covered() const { return len_[1]; }

 private:
  void update(std::size_t node, std::size_t nl, std::size_t nr, std::size_t l, std::size_t r, int v) {
    if (r <= nl || nr <= l) return;
    if (l <= nl && nr <= r) cnt_[node] += v;
    else {
      std::size_t mid = (nl + nr) / 2;
      update(2 * node, nl, mid, l, r, v);
      update(2 * node + 1, mid, nr, l, r, v);
    }
    if (cnt_[node] > 0) len_[node] = ys_[nr] - ys_[nl];
    else if (nr - nl == 1) len_[node] = 0;
    else len_[node] = len_[2 * node] + len_[2 * node + 1];
  }

  std::vector<double> ys_;
  std::vector<int> cnt_;
  std::vector<double> len_;
  std::size_t n_;
};

}  // namespace

double union_area(const std::vector<Rect>& rects) {
  std::vector<double> ys;
  struct Event {
    double x;
    int v;
    double y0, y1;
  };
  std::vector<Event> ev;
  for (const auto& r : rects) {
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) continue;
    ys.push_back(r.y0);
    ys.push_back(r.y1);
    ev.push_back({r.x0, +1, r.y0, r.y1});
    ev.push_back({r.x1, -1, r.y0, r.y1});
  }
  if (ev.empty()) return 0.0;
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.v < b.v;
  });
  CoverTree tree(ys);
  auto index = [&](double y) { return std::size_t(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin()); };
  CompensatedSum acc;
  double prev = ev.front().x;
  for (const auto& e : ev) {
    if (e.x > prev) {
      acc.add(tree.covered() * (e.x - prev));
      prev = e.x;
    }
    tree.update(index(e.y0), index(e.y1), e.v);
  }
  return acc.value();
}

double Envelope::area() const {
  CompensatedSum acc;
  for (std::size_t k = 0; k < heights.size(); ++k)
    if (heights[k] > 0) acc.add((breaks[k + 1] - breaks[k]) * heights[k]);
  return acc.value();
}

double Envelope::min_over(double a, double b) const {
  if (breaks.empty() || a < breaks.front() || b > breaks.back()) return 0.0;
  auto it = std::upper_bound(breaks.begin(), breaks.end(), a);
  std::size_t k = std::size_t(it - breaks.begin()) - 1;
  double m = __builtin_inf();
  for (; k < heights.size() && breaks[k] < b; ++k) m = std::min(m, heights[k]);
  return std::isinf(m) ? 0.0 : m;
}

namespace {

Envelope merge_pieces(const std::vector<double>& coords, const std::vector<double>& keys) {
  Envelope e;
  if (coords.size() < 2) return e;
  e.breaks.push_back(coords[0]);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (!e.heights.empty() && e.heights.back() == keys[k]) e.breaks.back() = coords[k + 1];
    else {
      e.heights.push_back(keys[k]);
      e.breaks.push_back(coords[k + 1]);
    }
  }
  return e;
}

}  // namespace

Envelope paint_envelope_keys(std::vector<Segment>& segs) {
  std::erase_if(segs, [](const Segment& s) { return !(s.hi > s.lo); });
  if (segs.empty()) return {};
  std::vector<double> coords;
  coords.reserve(2 * segs.size());
  for (const auto& s : segs) {
    coords.push_back(s.lo);
    coords.push_back(s.hi);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
    if (a.key != b.key) return a.key > b.key;
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
  });
  std::size_t pieces = coords.size() - 1;
  std::vector<double> key(pieces, -__builtin_inf());
  // next[k]: first unpainted piece at or after k (path-halving union-find).
  std::vector<std::size_t> next(pieces + 1);
  std::iota(next.begin(), next.end(), std::size_t{0});
  auto find = [&](std::size_t k) {
    while (next[k] != k) {
      next[k] = next[next[k]];
      k = next[k];
    }
    return k;
  };
  auto index = [&](double x) { return std::size_t(std::lower_bound(coords.begin(), coords.end(), x) - coords.begin()); };
  for (const auto& s : segs) {
    std::size_t a = index(s.lo), b = index(s.hi);
    for (std::size_t k = find(a); k < b; k = find(k)) {
      key[k] = s.key;
      next[k] = k + 1;
    }
  }
  return merge_pieces(coords, key);
}

Envelope sweep_envelope_keys(std::vector<Segment> segs) {
  std::erase_if(segs, [](const Segment& s) { return !(s.hi > s.lo); });
  if (segs.empty()) return {};
  struct Event {
    double x;
    bool open;
    double key;
  };
  std::vector<Event> ev;
  for (const auto& s : segs) {
    ev.push_back({s.lo, true, s.key});
    ev.push_back({s.hi, false, s.key});
  }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.x < b.x; });
  std::multiset<double> active;
  std::vector<double> coords, keys;
  std::size_t i = 0;
  while (i < ev.size()) {
    double x = ev[i].x;
    for (; i < ev.size() && ev[i].x == x; ++i) {
      if (ev[i].open) active.insert(ev[i].key);
      else active.erase(active.find(ev[i].key));
    }
    coords.push_back(x);
    if (i < ev.size()) keys.push_back(active.empty() ? -__builtin_inf() : *active.rbegin());
  }
  return merge_pieces(coords, keys);
}

std::vector<double> project(const Envelope& e, const Grid& grid) {
  if (grid.dims() != 1) throw DomainError("envelope projection needs a 1-D grid");
  std::vector<double> out(grid.shape[0], 0.0);
  if (e.breaks.empty()) return out;
  double h = grid.spacing[0];
  double slack = 1e-9 * h;
  for (std::size_t c = 0; c < out.size(); ++c) {
    double a = grid.lower(0, c), b = grid.upper(0, c);
    if (a + slack < e.breaks.front() || b - slack > e.breaks.back()) continue;
    // Pieces overlapping the cell by more than the snapping slack.
    auto it = std::upper_bound(e.breaks.begin(), e.breaks.end(), a + slack);
    std::size_t k = it == e.breaks.begin() ? 0 : std::size_t(it - e.breaks.begin()) - 1;
    double m = __builtin_inf();
    for (; k < e.heights.size() && e.breaks[k] < b - slack; ++k) m = std::min(m, e.heights[k]);
    out[c] = std::isinf(m) ? 0.0 : m;
  }
  return out;
}

}  // namespace curvilin
