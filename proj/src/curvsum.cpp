#include "curvilin/curvsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvilin/error.hpp"
#include "curvilin/power.hpp"
#include "curvilin/simd.hpp"

namespace curvilin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSnap = 1e-9;

double recip(double a) { return std::isinf(a) ? 0.0 : 1.0 / a; }

}  // namespace

Coefficients SumSpec::coefficients(double lambda) const {
  if (form == CoefficientForm::t_free) return t_free_coefficients(p, lambda);
  return lp_coefficients(MeanParams(p, t, lambda));
}

std::vector<double> SumSpec::lambda_set() const {
  if (lambda_free()) return {0.5};
  std::vector<double> out = uniform_lambdas(lambda_points);
  for (double l : extra_lambdas)
    if (l > 0 && l < 1) out.push_back(l);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

double effective_t(const SumSpec& s) { return s.form == CoefficientForm::t_free ? 0.5 : s.t; }

std::optional<double> crossing_lambda(const SumSpec& s, double f, double g, double a) {
  // sup over lambda of min(C^{1/a} f, D^{1/a} g) sits where the two terms cross.
  auto gap = [&](double lam) {
    Coefficients cd = s.coefficients(lam);
    return std::pow(cd.C, 1.0 / a) * f - std::pow(cd.D, 1.0 / a) * g;
  };
  double lo = 1e-12, hi = 1 - 1e-12;
  double glo = gap(lo);
  if ((glo > 0) == (gap(hi) > 0)) return std::nullopt;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if ((gap(mid) > 0) == (glo > 0)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::optional<double> interior(double l) {
  if (l > 0 && l < 1) return l;
  return std::nullopt;
}

}  // namespace

std::optional<double> SumSpec::pair_lambda(double f, double g) const {
  if (lambda_free() || !(f > 0) || !(g > 0)) return std::nullopt;
  double a = alphas.vertical();
  if (mode == SumMode::curvilinear) {
    if (!(a > 0) || std::isinf(a)) return std::nullopt;
    return interior(optimal_lambda(f, g, p, effective_t(*this), a));
  }
  if (std::isinf(a)) return std::nullopt;
  return crossing_lambda(*this, f, g, a);
}

std::optional<double> SumSpec::coordinate_lambda(double x, double y, std::size_t axis) const {
  if (lambda_free() || mode == SumMode::quasi || !(x > 0) || !(y > 0)) return std::nullopt;
  double a = alphas.alphas[axis];
  if (!(a > 0) || std::isinf(a)) return std::nullopt;
  return interior(optimal_lambda(x, y, p, effective_t(*this), a));
}

void validate(const SumSpec& spec, std::size_t base_dims) {
  if (!(spec.p > 0)) throw DomainError("p must be positive");
  if (spec.form == CoefficientForm::with_t && !(spec.t > 0 && spec.t < 1))
    throw DomainError("t must lie in (0,1)");
  if (spec.alphas.size() != base_dims + 1)
    throw DomainError("power vector length must be n + 1 = " + std::to_string(base_dims + 1));
  if (spec.lambda_points < 1) throw DomainError("lambda_points must be positive");
  if (spec.refine < 1) throw DomainError("refine must be positive");
  const auto& al = spec.alphas.alphas;
  for (double a : al)
    if (std::isnan(a)) throw DomainError("alpha is NaN");
  bool zero_base = std::find(al.begin(), al.end() - 1, 0.0) != al.end() - 1;
  if ((spec.mode == SumMode::quasi && zero_base) || (spec.mode != SumMode::curvilinear && al.back() == 0.0))
    throw DomainError("quasi-curvilinear sums need nonzero alphas");
}

void inject_volume_lambda(SumSpec& spec, double va, double vb) {
  if (spec.lambda_free() || !(va > 0) || !(vb > 0)) return;
  double g = spec.alphas.gamma();
  if (!(g != 0) || std::isinf(g)) return;
  double lam;
  if (spec.alphas.main_branch()) {
    if (!(g > 0)) return;
    lam = optimal_lambda(va, vb, spec.p, effective_t(spec), g);
  } else {
    if (spec.form == CoefficientForm::t_free) return;
    lam = min_branch_lambda(va, vb, spec.p, spec.t, g);
  }
  if (lam > 0 && lam < 1) spec.extra_lambdas.push_back(lam);
}

namespace {

enum class Rule { power, max, min, quasi };

struct AxisRule {
  Rule rule;
  double alpha;
};

struct Rules {
  std::vector<AxisRule> base;
  AxisRule vertical;
  bool negate = false;  // vertical power rule with alpha < 0

  double height_of(double key) const {
    if (key == kNegInf) return 0.0;
    if (vertical.rule != Rule::power) return key;
    return power_inverse(negate ? -key : key, vertical.alpha);
  }
};

AxisRule rule_for(double a, bool quasi) {
  if (quasi) return {Rule::quasi, a};
  if (a == kInf) return {Rule::max, a};
  if (a == -kInf) return {Rule::min, a};
  return {Rule::power, a};
}

Rules make_rules(const SumSpec& spec) {
  Rules r;
  std::size_t n = spec.alphas.base_dims();
  for (std::size_t i = 0; i < n; ++i) r.base.push_back(rule_for(spec.alphas.alphas[i], spec.mode == SumMode::quasi));
  r.vertical = rule_for(spec.alphas.vertical(), spec.mode != SumMode::curvilinear);
  r.negate = r.vertical.rule == Rule::power && r.vertical.alpha < 0;
  return r;
}

double transform_for(const AxisRule& r, double x) {
  return r.rule == Rule::power ? power_transform(x, r.alpha) : x;
}

// Nonzero cells of a staircase, laid out for row evaluation.
struct Prepared {
  std::size_t n = 0;
  std::vector<double> height, vt;
  std::vector<std::vector<double>> lo, hi, tlo, thi;
  std::vector<double> max_coord;
  std::size_t size() const { return height.size(); }
};

Prepared prepare(const StaircaseSet& s, const Rules& rules) {
  Prepared p;
  p.n = s.base_dims();
  p.lo.resize(p.n);
  p.hi.resize(p.n);
  p.tlo.resize(p.n);
  p.thi.resize(p.n);
  p.max_coord.assign(p.n, 0.0);
  for (std::size_t c = 0; c < s.heights.size(); ++c) {
    double h = s.heights[c];
    if (!(h > 0)) continue;
    auto idx = s.grid.unflatten(c);
    p.height.push_back(h);
    p.vt.push_back(transform_for(rules.vertical, h));
    for (std::size_t i = 0; i < p.n; ++i) {
      double lo = s.grid.lower(i, idx[i]), hi = s.grid.upper(i, idx[i]);
      p.lo[i].push_back(lo);
      p.hi[i].push_back(hi);
      p.tlo[i].push_back(transform_for(rules.base[i], lo));
      p.thi[i].push_back(transform_for(rules.base[i], hi));
      p.max_coord[i] = std::max(p.max_coord[i], hi);
    }
  }
  return p;
}

struct Scaled {
  double c, d;
};

Scaled quasi_scale(Coefficients cd, double a) {
  double e = recip(a);
  return {std::pow(cd.C, e), std::pow(cd.D, e)};
}

// Scalar evaluation of one coordinate; same arithmetic as the row kernels.
double combine_one(const AxisRule& r, Coefficients cd, double x, double tx, double y, double ty) {
  switch (r.rule) {
    case Rule::power: return power_inverse(cd.C * tx + cd.D * ty, r.alpha);
    case Rule::max: return std::max(x, y);
    case Rule::min: return std::min(x, y);
    case Rule::quasi: {
      Scaled s = quasi_scale(cd, r.alpha);
      double base = s.c * x, v = s.d * y;
      return v < base ? v : base;
    }
  }
  return 0;
}

double vertical_key(const Rules& rules, Coefficients cd, double f, double tf, double g, double tg) {
  const AxisRule& r = rules.vertical;
  if (r.rule == Rule::power) {
    double k = cd.C * tf + cd.D * tg;
    return rules.negate ? -k : k;
  }
  return combine_one(r, cd, f, tf, g, tg);
}

struct Row {
  std::vector<std::vector<double>> lo, hi;
  std::vector<double> key;
  Row(std::size_t n, std::size_t m) : lo(n, std::vector<double>(m)), hi(n, std::vector<double>(m)), key(m) {}
};

void eval_axis(const simd::Kernels& k, const AxisRule& r, Coefficients cd, double x, double tx,
               const std::vector<double>& ys, const std::vector<double>& tys, std::vector<double>& out) {
  std::size_t m = ys.size();
  switch (r.rule) {
    case Rule::power:
      k.affine(cd.C * tx, cd.D, tys.data(), out.data(), m);
      if (r.alpha != 1.0)
        for (auto& v : out) v = power_inverse(v, r.alpha);
      break;
    case Rule::max:
      for (std::size_t j = 0; j < m; ++j) out[j] = std::max(x, ys[j]);
      break;
    case Rule::min:
      for (std::size_t j = 0; j < m; ++j) out[j] = std::min(x, ys[j]);
      break;
    case Rule::quasi: {
      Scaled s = quasi_scale(cd, r.alpha);
      k.min_scaled(s.c * x, s.d, ys.data(), out.data(), m);
      break;
    }
  }
}

void eval_row(const simd::Kernels& k, const Rules& rules, const Prepared& A, std::size_t ia,
              const Prepared& B, Coefficients cd, Row& row) {
  for (std::size_t i = 0; i < A.n; ++i) {
    eval_axis(k, rules.base[i], cd, A.lo[i][ia], A.tlo[i][ia], B.lo[i], B.tlo[i], row.lo[i]);
    eval_axis(k, rules.base[i], cd, A.hi[i][ia], A.thi[i][ia], B.hi[i], B.thi[i], row.hi[i]);
  }
  const AxisRule& v = rules.vertical;
  if (v.rule == Rule::power) {
    k.affine(cd.C * A.vt[ia], cd.D, B.vt.data(), row.key.data(), B.size());
    if (rules.negate)
      for (auto& x : row.key) x = -x;
  } else {
    eval_axis(k, v, cd, A.height[ia], A.vt[ia], B.height, B.vt, row.key);
  }
}

struct Primitive {
  double lo[2], hi[2], key;
};

Primitive eval_one(const Rules& rules, const Prepared& A, std::size_t ia, const Prepared& B, std::size_t jb,
                   Coefficients cd) {
  Primitive p{};
  for (std::size_t i = 0; i < A.n; ++i) {
    p.lo[i] = combine_one(rules.base[i], cd, A.lo[i][ia], A.tlo[i][ia], B.lo[i][jb], B.tlo[i][jb]);
    p.hi[i] = combine_one(rules.base[i], cd, A.hi[i][ia], A.thi[i][ia], B.hi[i][jb], B.thi[i][jb]);
  }
  p.key = vertical_key(rules, cd, A.height[ia], A.vt[ia], B.height[jb], B.vt[jb]);
  return p;
}

// Per-pair lambdas evaluated in addition to the shared set.
std::vector<double> pair_lambdas(const SumSpec& spec, const Prepared& A, const Prepared& B) {
  std::vector<double> out;
  if (spec.lambda_free()) return out;
  for (std::size_t ia = 0; ia < A.size(); ++ia)
    for (std::size_t jb = 0; jb < B.size(); ++jb) {
      if (spec.pair_lambdas)
        if (auto l = spec.pair_lambda(A.height[ia], B.height[jb])) out.push_back(*l);
      if (spec.corner_lambdas)
        for (std::size_t i = 0; i < A.n; ++i)
          if (auto l = spec.coordinate_lambda(A.hi[i][ia], B.hi[i][jb], i)) out.push_back(*l);
    }
  return out;
}

template <class Sink>
void enumerate(const SumSpec& spec, const Rules& rules, const Prepared& A, const Prepared& B,
               const std::vector<double>& lambdas, Sink& sink) {
  if (A.size() == 0 || B.size() == 0) return;
  const auto& k = simd::active();
  Row row(A.n, B.size());
  for (double lam : lambdas) {
    Coefficients cd = spec.coefficients(lam);
    for (std::size_t ia = 0; ia < A.size(); ++ia) {
      eval_row(k, rules, A, ia, B, cd, row);
      sink.row(row);
    }
  }
  if (spec.lambda_free()) return;
  for (std::size_t ia = 0; ia < A.size(); ++ia)
    for (std::size_t jb = 0; jb < B.size(); ++jb) {
      if (spec.pair_lambdas)
        if (auto l = spec.pair_lambda(A.height[ia], B.height[jb]))
          sink.one(eval_one(rules, A, ia, B, jb, spec.coefficients(*l)));
      if (spec.corner_lambdas)
        for (std::size_t i = 0; i < A.n; ++i)
          if (auto l = spec.coordinate_lambda(A.hi[i][ia], B.hi[i][jb], i))
            sink.one(eval_one(rules, A, ia, B, jb, spec.coefficients(*l)));
    }
}

struct EnvelopeSink {
  std::vector<Segment> segs;
  void row(const Row& r) {
    for (std::size_t j = 0; j < r.key.size(); ++j) segs.push_back({r.lo[0][j], r.hi[0][j], r.key[j]});
  }
  void one(const Primitive& p) { segs.push_back({p.lo[0], p.hi[0], p.key}); }
};

struct CellRange {
  std::size_t first, last;
};

class GridSink {
 public:
  GridSink(const Grid& g, bool strict) : grid_(g), strict_(strict), best_(g.cells(), kNegInf) {}

  void row(const Row& r) {
    double lo[2], hi[2];
    for (std::size_t j = 0; j < r.key.size(); ++j) {
      for (std::size_t i = 0; i < grid_.dims(); ++i) {
        lo[i] = r.lo[i][j];
        hi[i] = r.hi[i][j];
      }
      cover(lo, hi, r.key[j]);
    }
  }
  void one(const Primitive& p) { cover(p.lo, p.hi, p.key); }
  std::vector<double>& best() { return best_; }

 private:
  bool range(std::size_t axis, double lo, double hi, CellRange& out) const {
    double o = grid_.origin[axis], h = grid_.spacing[axis];
    double f = std::ceil((lo - o) / h - kSnap);
    double l = std::floor((hi - o) / h + kSnap);
    if (l > double(grid_.shape[axis])) {
      if (strict_) throw ResolutionError("output grid does not cover the image of the sum");
      l = double(grid_.shape[axis]);
    }
    if (f < 0) f = 0;
    if (!(l > f)) return false;
    out = {std::size_t(f), std::size_t(l)};
    return true;
  }

  void cover(const double* lo, const double* hi, double key) {
    CellRange r0, r1;
    if (!range(0, lo[0], hi[0], r0)) return;
    if (grid_.dims() == 1) {
      for (std::size_t c = r0.first; c < r0.last; ++c)
        if (key > best_[c]) best_[c] = key;
      return;
    }
    if (!range(1, lo[1], hi[1], r1)) return;
    std::size_t w = grid_.shape[1];
    for (std::size_t a = r0.first; a < r0.last; ++a) {
      double* rowp = best_.data() + a * w;
      for (std::size_t b = r1.first; b < r1.last; ++b)
        if (key > rowp[b]) rowp[b] = key;
    }
  }

  Grid grid_;
  bool strict_;
  std::vector<double> best_;
};

// Largest coordinate the sum reaches on each base axis over the given lambdas.
std::vector<double> extents(const SumSpec& spec, const Rules& rules, const Prepared& A, const Prepared& B,
                            const std::vector<double>& lambdas) {
  std::vector<double> ext(A.n, 0.0);
  for (double lam : lambdas) {
    Coefficients cd = spec.coefficients(lam);
    for (std::size_t i = 0; i < A.n; ++i) {
      double x = A.max_coord[i], y = B.max_coord[i];
      double v = combine_one(rules.base[i], cd, x, transform_for(rules.base[i], x), y, transform_for(rules.base[i], y));
      ext[i] = std::max(ext[i], v);
    }
  }
  return ext;
}

Grid default_grid(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec, const std::vector<double>& ext) {
  std::size_t n = a.base_dims();
  std::vector<double> spacing(n);
  std::vector<std::size_t> shape(n);
  for (std::size_t i = 0; i < n; ++i) {
    spacing[i] = std::min(a.grid.spacing[i], b.grid.spacing[i]) / double(spec.refine);
    shape[i] = std::max<std::size_t>(1, std::size_t(std::ceil(ext[i] / spacing[i] - kSnap)));
  }
  return Grid(std::vector<double>(n, 0.0), spacing, shape);
}

std::vector<double> all_lambdas(const SumSpec& spec, const Prepared& A, const Prepared& B) {
  std::vector<double> l = spec.lambda_set();
  auto extra = pair_lambdas(spec, A, B);
  l.insert(l.end(), extra.begin(), extra.end());
  return l;
}

SumResult from_grid(const Grid& g, std::vector<double>& best, const Rules& rules) {
  SumResult res;
  res.set.grid = g;
  res.set.heights.resize(best.size());
  for (std::size_t c = 0; c < best.size(); ++c) res.set.heights[c] = rules.height_of(best[c]);
  res.volume = res.set.volume();
  return res;
}

SumResult intersect_over_lambda(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec,
                                const std::optional<Grid>& out) {
  Rules rules = make_rules(spec);
  Prepared A = prepare(a, rules), B = prepare(b, rules);
  auto lambdas = spec.lambda_set();
  Grid g = out ? *out : default_grid(a, b, spec, extents(spec, rules, A, B, lambdas));
  std::vector<double> acc;
  const auto& k = simd::active();
  SumSpec one = spec;
  one.pair_lambdas = false;
  one.corner_lambdas = false;
  for (double lam : lambdas) {
    GridSink sink(g, false);
    enumerate(one, rules, A, B, std::vector<double>{lam}, sink);
    if (acc.empty()) acc = sink.best();
    else k.min_into(acc.data(), sink.best().data(), acc.size());
  }
  if (acc.empty()) acc.assign(g.cells(), kNegInf);
  return from_grid(g, acc, rules);
}

SumResult sum_impl(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec, const std::optional<Grid>& out) {
  std::size_t n = a.base_dims();
  if (b.base_dims() != n) throw DomainError("summands must have the same base dimension");
  if (n < 1 || n > 2) throw DomainError("grid sums support n = 1 or 2");
  validate(spec, n);
  if (out && out->dims() != n) throw DomainError("output grid dimension mismatch");
  if (spec.p < 1) return intersect_over_lambda(a, b, spec, out);
  Rules rules = make_rules(spec);
  Prepared A = prepare(a, rules), B = prepare(b, rules);
  auto lambdas = spec.lambda_set();
  if (n == 1) {
    EnvelopeSink sink;
    enumerate(spec, rules, A, B, lambdas, sink);
    SumResult res;
    res.envelope = map_heights(paint_envelope_keys(sink.segs), [&](double key) { return rules.height_of(key); });
    Grid g;
    if (out) {
      g = *out;
      if (res.envelope.extent() > g.upper(0, g.shape[0] - 1) + kSnap * g.spacing[0])
        throw ResolutionError("output grid does not cover the image of the sum");
    } else {
      g = default_grid(a, b, spec, {res.envelope.extent()});
    }
    res.set = StaircaseSet{g, project(res.envelope, g)};
    res.volume = res.envelope.area();
    return res;
  }
  Grid g = out ? *out : default_grid(a, b, spec, extents(spec, rules, A, B, all_lambdas(spec, A, B)));
  GridSink sink(g, true);
  enumerate(spec, rules, A, B, lambdas, sink);
  return from_grid(g, sink.best(), rules);
}

}  // namespace

Grid output_grid(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec, const std::vector<double>& spacing) {
  std::size_t n = a.base_dims();
  if (b.base_dims() != n || spacing.size() != n) throw DomainError("output grid dimension mismatch");
  validate(spec, n);
  Rules rules = make_rules(spec);
  Prepared A = prepare(a, rules), B = prepare(b, rules);
  auto ext = extents(spec, rules, A, B, all_lambdas(spec, A, B));
  std::vector<std::size_t> shape(n);
  for (std::size_t i = 0; i < n; ++i)
    shape[i] = std::max<std::size_t>(1, std::size_t(std::ceil(ext[i] / spacing[i] - kSnap)));
  return Grid(std::vector<double>(n, 0.0), spacing, shape);
}

SumResult curvilinear_sum_grid(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec,
                               const std::optional<Grid>& out) {
  if (spec.mode != SumMode::curvilinear) throw DomainError("curvilinear_sum_grid needs mode = curvilinear");
  return sum_impl(a, b, spec, out);
}

SumResult quasi_sum_grid(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec,
                         const std::optional<Grid>& out) {
  if (spec.mode == SumMode::curvilinear) throw DomainError("quasi_sum_grid needs a quasi mode");
  return sum_impl(a, b, spec, out);
}

namespace {

std::vector<double> lambdas_1d(const IntervalUnion& k, const IntervalUnion& l, const SumSpec& spec) {
  std::vector<double> out = spec.lambda_set();
  if (spec.lambda_free() || !spec.pair_lambdas) return out;
  double a = spec.alphas.vertical();
  auto add = [&](double x, double y) {
    if (x > 0 && y > 0 && a > 0 && !std::isinf(a)) {
      double lam = optimal_lambda(x, y, spec.p, effective_t(spec), a);
      if (lam > 0 && lam < 1) out.push_back(lam);
    }
  };
  add(k.length(), l.length());
  for (auto [ka, kb] : k.intervals)
    for (auto [la, lb] : l.intervals) add(kb, lb);
  return out;
}

void check_1d(const SumSpec& spec) {
  if (spec.mode != SumMode::curvilinear) throw DomainError("curvilinear_sum_1d handles the curvilinear regime only");
  if (spec.p < 1) throw DomainError("curvilinear_sum_1d needs p >= 1");
  validate(spec, 0);
}

}  // namespace

IntervalUnion curvilinear_sum_1d(const IntervalUnion& k0, const IntervalUnion& l0, const SumSpec& spec) {
  check_1d(spec);
  IntervalUnion k = normalize(k0), l = normalize(l0);
  IntervalUnion out;
  double a = spec.alphas.vertical();
  for (double lam : lambdas_1d(k, l, spec)) {
    Coefficients cd = spec.coefficients(lam);
    for (auto [ka, kb] : k.intervals)
      for (auto [la, lb] : l.intervals)
        out.intervals.emplace_back(combine_power(ka, la, cd, a), combine_power(kb, lb, cd, a));
  }
  return normalize(std::move(out));
}

IntervalUnion sum_oracle_1d(const IntervalUnion& k0, const IntervalUnion& l0, const SumSpec& spec, double cell,
                            int dense_points) {
  check_1d(spec);
  IntervalUnion k = normalize(k0), l = normalize(l0);
  auto cells = [&](const IntervalUnion& u) {
    std::vector<double> lo;
    for (auto [a, b] : u.intervals) {
      double fa = a / cell, fb = b / cell;
      if (std::abs(fa - std::round(fa)) > 1e-9 || std::abs(fb - std::round(fb)) > 1e-9)
        throw ResolutionError("interval endpoints are not aligned with the oracle cell");
      for (long long i = std::llround(fa); i < std::llround(fb); ++i) lo.push_back(double(i) * cell);
    }
    return lo;
  };
  auto kc = cells(k), lc = cells(l);
  if (kc.size() * lc.size() > 4096) throw BudgetError("oracle instance too large");
  std::vector<double> lambdas = lambdas_1d(k, l, spec);
  if (dense_points > 0 && !spec.lambda_free()) {
    if (dense_points < 4096) throw BudgetError("oracle needs at least 4096 dense lambdas");
    auto d = uniform_lambdas(dense_points);
    lambdas.insert(lambdas.end(), d.begin(), d.end());
  }
  double a = spec.alphas.vertical();
  IntervalUnion out;
  for (double lam : lambdas) {
    Coefficients cd = spec.coefficients(lam);
    for (double x : kc)
      for (double y : lc) out.intervals.emplace_back(combine_power(x, y, cd, a), combine_power(x + cell, y + cell, cd, a));
  }
  return normalize(std::move(out));
}

double curvilinear_sum_volume(const BoxUnion& a, const BoxUnion& b, const SumSpec& spec) {
  if (a.dim != 2 || b.dim != 2) throw DomainError("non-compressed sums are implemented for n = 1 (dim 2)");
  if (spec.mode != SumMode::curvilinear || spec.p < 1) throw DomainError("non-compressed sums need the curvilinear regime with p >= 1");
  validate(spec, 1);
  struct Column {
    double lo, hi;
    IntervalUnion fiber;
  };
  auto columns = [](const BoxUnion& u) {
    std::vector<Column> out;
    if (u.boxes.empty()) return out;
    Grid g = aligned_base_grid(u);
    for (std::size_t c = 0; c < g.shape[0]; ++c) {
      Column col{g.lower(0, c), g.upper(0, c), {}};
      for (const auto& bx : u.boxes)
        if (bx.lo[0] <= col.lo && bx.hi[0] >= col.hi) col.fiber.intervals.emplace_back(bx.lo[1], bx.hi[1]);
      col.fiber = normalize(col.fiber);
      if (!col.fiber.empty()) out.push_back(std::move(col));
    }
    return out;
  };
  auto ca = columns(a), cb = columns(b);
  double ab = spec.alphas.alphas[0], av = spec.alphas.vertical();
  std::vector<Rect> rects;
  auto emit = [&](const Column& x, const Column& y, Coefficients cd) {
    double z0 = combine_power(x.lo, y.lo, cd, ab), z1 = combine_power(x.hi, y.hi, cd, ab);
    for (auto [u0, u1] : x.fiber.intervals)
      for (auto [v0, v1] : y.fiber.intervals)
        rects.push_back({z0, z1, combine_power(u0, v0, cd, av), combine_power(u1, v1, cd, av)});
  };
  for (double lam : spec.lambda_set()) {
    Coefficients cd = spec.coefficients(lam);
    for (const auto& x : ca)
      for (const auto& y : cb) emit(x, y, cd);
  }
  if (!spec.lambda_free() && spec.pair_lambdas)
    for (const auto& x : ca)
      for (const auto& y : cb)
        if (auto l = spec.pair_lambda(x.fiber.length(), y.fiber.length())) emit(x, y, spec.coefficients(*l));
  return union_area(rects);
}

namespace {

std::vector<double> dilation_factors(double c, double p, const PowerVector& alphas) {
  if (!(c > 0)) throw DomainError("dilation factor must be positive");
  std::vector<double> f;
  for (double a : alphas.alphas) {
    if (a == 0.0 || std::isinf(a)) throw DomainError("scalar dilation needs finite nonzero alphas");
    f.push_back(std::pow(c, 1.0 / (p * a)));
  }
  return f;
}

}  // namespace

StaircaseSet scalar_dilate(const StaircaseSet& a, double c, double p, const PowerVector& alphas) {
  std::size_t n = a.base_dims();
  if (alphas.size() != n + 1) throw DomainError("power vector length must be n + 1");
  auto f = dilation_factors(c, p, alphas);
  StaircaseSet out = a;
  for (std::size_t i = 0; i < n; ++i) {
    out.grid.origin[i] *= f[i];
    out.grid.spacing[i] *= f[i];
  }
  for (auto& h : out.heights) h *= f[n];
  return out;
}

BoxUnion scalar_dilate(const BoxUnion& a, double c, double p, const PowerVector& alphas) {
  if (alphas.size() != std::size_t(a.dim)) throw DomainError("power vector length must equal dim");
  auto f = dilation_factors(c, p, alphas);
  BoxUnion out = a;
  for (auto& b : out.boxes)
    for (int i = 0; i < a.dim; ++i) {
      b.lo[i] *= f[i];
      b.hi[i] *= f[i];
    }
  return out;
}

BaseSum lp_minkowski_sum_base(const CellMask& x, const CellMask& y, double p, double t, int lambda_points,
                              const std::optional<Grid>& out) {
  if (!(p >= 1)) throw DomainError("lp_minkowski_sum_base needs p >= 1");
  std::size_t n = x.grid.dims();
  SumSpec spec;
  spec.p = p;
  spec.t = t;
  std::vector<double> al(n, 1.0);
  al.push_back(kInf);
  spec.alphas = PowerVector(al);
  spec.lambda_points = lambda_points;
  spec.pair_lambdas = false;
  inject_volume_lambda(spec, x.volume(), y.volume());
  BaseSum res;
  if (x.count() == 0 || y.count() == 0) {
    Grid g = out ? *out : x.grid;
    res.cells = CellMask{g, std::vector<std::uint8_t>(g.cells(), 0)};
    return res;
  }
  SumResult s = curvilinear_sum_grid(indicator(x), indicator(y), spec, out);
  res.cells.grid = s.set.grid;
  res.cells.inside.resize(s.set.heights.size());
  for (std::size_t c = 0; c < s.set.heights.size(); ++c) res.cells.inside[c] = s.set.heights[c] > 0.5;
  res.volume = s.volume;
  return res;
}

SumResult sum_oracle(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec, int dense_points,
                     const std::optional<Grid>& out) {
  std::size_t n = a.base_dims();
  if (b.base_dims() != n || n < 1 || n > 2) throw DomainError("oracle supports n = 1 or 2");
  validate(spec, n);
  for (std::size_t i = 0; i < n; ++i)
    if (a.grid.shape[i] > 16 || b.grid.shape[i] > 16) throw BudgetError("oracle limited to 16 cells per axis");
  if (dense_points != 0 && dense_points < 4096) throw BudgetError("oracle needs at least 4096 dense lambdas");
  if (spec.p < 1) throw DomainError("oracle covers the union regime (p >= 1)");

  struct Cell {
    double lo[2], hi[2], h;
  };
  auto cells = [&](const StaircaseSet& s) {
    std::vector<Cell> out;
    for (std::size_t c = 0; c < s.heights.size(); ++c) {
      if (!(s.heights[c] > 0)) continue;
      auto idx = s.grid.unflatten(c);
      Cell cl{};
      for (std::size_t i = 0; i < n; ++i) {
        cl.lo[i] = s.grid.lower(i, idx[i]);
        cl.hi[i] = s.grid.upper(i, idx[i]);
      }
      cl.h = s.heights[c];
      out.push_back(cl);
    }
    return out;
  };
  auto ca = cells(a), cb = cells(b);
  const auto& al = spec.alphas.alphas;
  bool quasi_base = spec.mode == SumMode::quasi;
  bool quasi_vert = spec.mode != SumMode::curvilinear;
  auto coord = [&](double x, double y, Coefficients cd, double alpha, bool quasi) {
    if (quasi) {
      double e = recip(alpha);
      return std::min(std::pow(cd.C, e) * x, std::pow(cd.D, e) * y);
    }
    return combine_power(x, y, cd, alpha);
  };
  struct Item {
    double lo[2], hi[2], h;
  };
  std::vector<Item> items;
  auto emit = [&](const Cell& x, const Cell& y, double lam) {
    Coefficients cd = spec.coefficients(lam);
    Item it{};
    for (std::size_t i = 0; i < n; ++i) {
      it.lo[i] = coord(x.lo[i], y.lo[i], cd, al[i], quasi_base);
      it.hi[i] = coord(x.hi[i], y.hi[i], cd, al[i], quasi_base);
    }
    it.h = quasi_vert ? coord(x.h, y.h, cd, al[n], true) : mean_p_alpha(x.h, y.h, cd, al[n]);
    items.push_back(it);
  };
  std::vector<double> lambdas = spec.lambda_set();
  if (dense_points > 0 && !spec.lambda_free()) {
    auto d = uniform_lambdas(dense_points);
    lambdas.insert(lambdas.end(), d.begin(), d.end());
  }
  for (double lam : lambdas)
    for (const auto& x : ca)
      for (const auto& y : cb) emit(x, y, lam);
  if (!spec.lambda_free())
    for (const auto& x : ca)
      for (const auto& y : cb) {
        if (spec.pair_lambdas)
          if (auto l = spec.pair_lambda(x.h, y.h)) emit(x, y, *l);
        if (spec.corner_lambdas)
          for (std::size_t i = 0; i < n; ++i)
            if (auto l = spec.coordinate_lambda(x.hi[i], y.hi[i], i)) emit(x, y, *l);
      }

  SumResult res;
  if (n == 1) {
    std::vector<Segment> segs;
    for (const auto& it : items) segs.push_back({it.lo[0], it.hi[0], it.h});
    res.envelope = sweep_envelope_keys(segs);
    for (auto& h : res.envelope.heights)
      if (h == kNegInf) h = 0;
    Grid g = out ? *out : [&] {
      double hh = std::min(a.grid.spacing[0], b.grid.spacing[0]) / double(spec.refine);
      return Grid({0.0}, {hh}, {std::max<std::size_t>(1, std::size_t(std::ceil(res.envelope.extent() / hh - kSnap)))});
    }();
    res.set = StaircaseSet{g, project(res.envelope, g)};
    res.volume = res.envelope.area();
    return res;
  }
  Grid g;
  if (out) g = *out;
  else {
    double ext[2] = {0, 0};
    for (const auto& it : items)
      for (std::size_t i = 0; i < 2; ++i) ext[i] = std::max(ext[i], it.hi[i]);
    std::vector<double> sp(2);
    std::vector<std::size_t> sh(2);
    for (std::size_t i = 0; i < 2; ++i) {
      sp[i] = std::min(a.grid.spacing[i], b.grid.spacing[i]) / double(spec.refine);
      sh[i] = std::max<std::size_t>(1, std::size_t(std::ceil(ext[i] / sp[i] - kSnap)));
    }
    g = Grid({0.0, 0.0}, sp, sh);
  }
  res.set = StaircaseSet{g, std::vector<double>(g.cells(), 0.0)};
  for (const auto& it : items) {
    long long r[2][2];
    bool ok = true;
    for (std::size_t i = 0; i < 2; ++i) {
      r[i][0] = (long long)std::ceil((it.lo[i] - g.origin[i]) / g.spacing[i] - kSnap);
      r[i][1] = (long long)std::floor((it.hi[i] - g.origin[i]) / g.spacing[i] + kSnap);
      if (r[i][1] > (long long)g.shape[i]) throw ResolutionError("output grid does not cover the image of the sum");
      r[i][0] = std::max(r[i][0], 0LL);
      ok = ok && r[i][1] > r[i][0];
    }
    if (!ok) continue;
    for (long long u = r[0][0]; u < r[0][1]; ++u)
      for (long long v = r[1][0]; v < r[1][1]; ++v) {
        double& cell = res.set.heights[std::size_t(u) * g.shape[1] + std::size_t(v)];
        cell = std::max(cell, it.h);
      }
  }
  res.volume = res.set.volume();
  return res;
}

}  // namespace curvilin
