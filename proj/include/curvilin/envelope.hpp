#pragma once

#include <vector>

#include "curvilin/sets.hpp"

namespace curvilin {

struct Rect {
  double x0, x1, y0, y1;
};

// Exact area of a union of rectangles (sweep over x, segment tree over y).
double union_area(const std::vector<Rect>& rects);

// Rectangle [lo, hi) x [0, height(key)] with height increasing in key.
struct Segment {
  double lo, hi, key;
};

// Upper envelope of anchored rectangles as a piecewise-constant function.
struct Envelope {
  std::vector<double> breaks;   // size pieces + 1
  std::vector<double> heights;  // 0 where uncovered

  double area() const;
  double extent() const { return breaks.empty() ? 0.0 : breaks.back(); }
  // min of the envelope over [a, b), 0 if any part is uncovered.
  double min_over(double a, double b) const;
};

// Pieces carry the winning key; uncovered pieces carry -inf.
Envelope paint_envelope_keys(std::vector<Segment>& segs);
// Independent reference: event sweep with an ordered multiset of active keys.
Envelope sweep_envelope_keys(std::vector<Segment> segs);

// Converts keys of an envelope built by paint_envelope_keys to heights and merges equal pieces.
template <class HeightFn>
Envelope map_heights(const Envelope& e, HeightFn&& height) {
  Envelope out;
  if (e.breaks.empty()) return out;
  out.breaks.push_back(e.breaks[0]);
  double last_key = 0, last_h = 0;
  bool have = false;
  for (std::size_t k = 0; k < e.heights.size(); ++k) {
    double key = e.heights[k];
    double h;
    if (key == -__builtin_inf()) h = 0;
    else if (have && key == last_key) h = last_h;
    else {
      h = height(key);
      last_key = key;
      last_h = h;
      have = true;
    }
    if (!out.heights.empty() && out.heights.back() == h) out.breaks.back() = e.breaks[k + 1];
    else {
      out.heights.push_back(h);
      out.breaks.push_back(e.breaks[k + 1]);
    }
  }
  return out;
}

// Lower Riemann projection of the envelope onto a 1-D grid.
std::vector<double> project(const Envelope& e, const Grid& grid);

}  // namespace curvilin
