#include "curvilin/measures.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "curvilin/error.hpp"

namespace curvilin {

namespace {

std::vector<double> center(const Grid& g, std::size_t c) {
  auto idx = g.unflatten(c);
  std::vector<double> x(g.dims());
  for (std::size_t i = 0; i < g.dims(); ++i) x[i] = g.origin[i] + (double(idx[i]) + 0.5) * g.spacing[i];
  return x;
}

double unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1p-53; }

}  // namespace

DensityMeasure density_from(const Grid& box, DensityFn phi, std::optional<double> alpha) {
  DensityMeasure mu;
  mu.density.grid = box;
  mu.density.values.resize(box.cells());
  for (std::size_t c = 0; c < box.cells(); ++c) mu.density.values[c] = phi(center(box, c));
  mu.phi = std::move(phi);
  mu.alpha = alpha;
  return mu;
}

DensityMeasure lebesgue_measure(const Grid& box) {
  auto mu = density_from(box, [](std::span<const double>) { return 1.0; }, kInf);
  mu.lebesgue = true;
  return mu;
}

DensityMeasure convex_indicator_density(const Grid& box, const Box& support) {
  return density_from(
      box,
      [support](std::span<const double> x) {
        for (std::size_t i = 0; i < x.size(); ++i)
          if (x[i] < support.lo[i] || x[i] > support.hi[i]) return 0.0;
        return 1.0;
      },
      kInf);
}

DensityMeasure affine_density(const Grid& box, double radius) {
  if (!(radius > 0)) throw DomainError("radius must be positive");
  return density_from(
      box,
      [radius](std::span<const double> x) {
        double s = 0;
        for (double v : x) s += std::abs(v);
        return std::max(0.0, 1.0 - s / radius);
      },
      1.0);
}

DensityMeasure gaussian_density(const Grid& box, std::vector<double> c, double sigma) {
  if (!(sigma > 0)) throw DomainError("sigma must be positive");
  return density_from(
      box,
      [c, sigma](std::span<const double> x) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
        return std::exp(-s / (2 * sigma * sigma));
      },
      0.0);
}

double concavity_violation(const DensityMeasure& mu, std::uint64_t seed, int samples) {
  if (!mu.alpha) return 0.0;
  const Grid& g = mu.density.grid;
  std::mt19937_64 rng(seed);
  std::size_t n = g.dims();
  std::vector<double> x(n), y(n), z(n);
  double worst = -kInf;
  for (int it = 0; it < samples; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double len = g.spacing[i] * double(g.shape[i]);
      x[i] = g.origin[i] + unit(rng) * len;
      y[i] = g.origin[i] + unit(rng) * len;
    }
    double s = unit(rng);
    double fx = mu.phi(x), fy = mu.phi(y);
    if (!(fx * fy > 0)) continue;
    for (std::size_t i = 0; i < n; ++i) z[i] = (1 - s) * x[i] + s * y[i];
    worst = std::max(worst, mean_alpha(fx, fy, s, *mu.alpha) - mu.phi(z));
  }
  return worst;
}

double measure_of(const CellMask& a, const DensityMeasure& mu) {
  if (mu.lebesgue) return a.volume();
  const Grid& g = mu.density.grid;
  if (g.dims() != a.grid.dims()) throw DomainError("set and measure dimensions differ");
  CompensatedSum acc;
  for (std::size_t c = 0; c < g.cells(); ++c) {
    auto x = center(g, c);
    std::vector<std::size_t> idx(x.size());
    bool in = true;
    for (std::size_t i = 0; i < x.size() && in; ++i) {
      double f = std::floor((x[i] - a.grid.origin[i]) / a.grid.spacing[i]);
      in = f >= 0 && f < double(a.grid.shape[i]);
      if (in) idx[i] = std::size_t(f);
    }
    if (in && a.inside[a.grid.flatten(idx)]) acc.add(mu.density.values[c]);
  }
  // Coverage: every marked cell must lie inside the measure's box.
  for (std::size_t c = 0; c < a.inside.size(); ++c) {
    if (!a.inside[c]) continue;
    auto idx = a.grid.unflatten(c);
    for (std::size_t i = 0; i < idx.size(); ++i)
      if (a.grid.upper(i, idx[i]) > g.upper(i, g.shape[i] - 1) + 1e-9 * g.spacing[i] ||
          a.grid.lower(i, idx[i]) < g.origin[i] - 1e-9 * g.spacing[i])
        throw ResolutionError("set extends beyond the measure's box");
  }
  return acc.value() * g.cell_volume();
}

double measure_of(const Envelope& e, const DensityMeasure& mu) {
  if (mu.lebesgue) return e.area();
  const Grid& g = mu.density.grid;
  if (g.dims() != 2) throw DomainError("envelope measures need a 2-D density");
  double hx = g.spacing[0], hr = g.spacing[1];
  double x_end = g.upper(0, g.shape[0] - 1), r_end = g.upper(1, g.shape[1] - 1);
  CompensatedSum acc;
  for (std::size_t k = 0; k < e.heights.size(); ++k) {
    double a = e.breaks[k], b = e.breaks[k + 1], top = e.heights[k];
    if (!(top > 0)) continue;
    if (b > x_end + 1e-9 * hx || top > r_end + 1e-9 * hr || a < g.origin[0] - 1e-9 * hx)
      throw ResolutionError("set extends beyond the measure's box");
    std::size_t i0 = std::size_t(std::max(0.0, std::floor((a - g.origin[0]) / hx)));
    for (std::size_t i = i0; i < g.shape[0] && g.lower(0, i) < b; ++i) {
      double w = std::min(b, g.upper(0, i)) - std::max(a, g.lower(0, i));
      if (!(w > 0)) continue;
      for (std::size_t j = 0; j < g.shape[1] && g.lower(1, j) < top; ++j) {
        double len = std::min(top, g.upper(1, j)) - g.lower(1, j);
        acc.add(mu.density.values[i * g.shape[1] + j] * w * len);
      }
    }
  }
  return acc.value();
}

double measure_of(const StaircaseSet& a, const DensityMeasure& mu) {
  if (mu.lebesgue) return a.volume();
  if (a.base_dims() != 1) throw DomainError("non-Lebesgue staircase measures are implemented for n = 1");
  Envelope e;
  e.breaks.push_back(a.grid.origin[0]);
  for (std::size_t c = 0; c < a.heights.size(); ++c) {
    e.heights.push_back(a.heights[c]);
    e.breaks.push_back(a.grid.upper(0, c));
  }
  return measure_of(e, mu);
}

CellMask SectionMeasure::level(double r) const {
  if (!(sup > 0)) throw DegenerateError("super-level set of a zero section measure");
  CellMask m{grid, std::vector<std::uint8_t>(values.size(), 0)};
  // Compare normalized values so r = v / sup always keeps v's own cell.
  for (std::size_t u = 0; u < values.size(); ++u) m.inside[u] = values[u] > 0 && values[u] / sup >= r;
  return m;
}

double SectionMeasure::layer_cake() const {
  if (!(sup > 0)) return 0.0;
  std::vector<double> levels;
  for (double v : values)
    if (v > 0) levels.push_back(v / sup);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double prev = 0, integral = 0;
  for (double r : levels) {
    integral += (r - prev) * level(r).volume();
    prev = r;
  }
  return sup * integral;
}

SectionMeasure mu_section_quantities(const CellMask& a, const DensityMeasure& mu, int k) {
  std::size_t n = a.grid.dims();
  if (k < 0 || std::size_t(k) > n) throw DomainError("section subspace index k must lie in [0, n]");
  // Per-cell mu masses on the set's own grid, then fiber sums along the first k axes.
  std::vector<double> mass(a.inside.size(), 0.0);
  if (mu.lebesgue) {
    for (std::size_t c = 0; c < mass.size(); ++c) mass[c] = a.inside[c] ? a.grid.cell_volume() : 0.0;
  } else {
    if (!(mu.density.grid == a.grid)) throw DomainError("sets must live on the density grid");
    for (std::size_t c = 0; c < mass.size(); ++c)
      mass[c] = a.inside[c] ? mu.density.values[c] * a.grid.cell_volume() : 0.0;
  }
  std::vector<double> origin, spacing;
  std::vector<std::size_t> shape;
  double hperp = 1;
  for (std::size_t i = std::size_t(k); i < n; ++i) {
    origin.push_back(a.grid.origin[i]);
    spacing.push_back(a.grid.spacing[i]);
    shape.push_back(a.grid.shape[i]);
    hperp *= a.grid.spacing[i];
  }
  SectionMeasure s;
  s.grid = Grid(origin, spacing, shape);
  std::size_t m = s.grid.cells();
  std::vector<CompensatedSum> acc(m);
  for (std::size_t c = 0; c < mass.size(); ++c) acc[c % m].add(mass[c]);
  s.values.resize(m);
  for (std::size_t u = 0; u < m; ++u) {
    s.values[u] = acc[u].value() / hperp;
    s.sup = std::max(s.sup, s.values[u]);
  }
  return s;
}

double FSpec::forward(double x) const {
  switch (kind) {
    case Kind::power:
      if (x < 0 || (a < 0 && x == 0)) throw RangeError("power F outside its domain");
      return std::pow(x, a);
    case Kind::log:
      if (!(x > 0)) throw RangeError("log F needs a positive argument");
      return std::log(x);
    case Kind::linear: return a * x + b;
  }
  return 0;
}

double FSpec::inverse(double y) const {
  switch (kind) {
    case Kind::power:
      if (y < 0 || (a < 0 && y == 0)) throw RangeError("power F inverse outside its range");
      return std::pow(y, 1.0 / a);
    case Kind::log: return std::exp(y);
    case Kind::linear:
      if (a == 0) throw RangeError("constant F has no inverse");
      return (y - b) / a;
  }
  return 0;
}

double FSpec::derivative(double x) const {
  switch (kind) {
    case Kind::power: return a * std::pow(x, a - 1);
    case Kind::log: return 1.0 / x;
    case Kind::linear: return a;
  }
  return 0;
}

SurfaceEstimate summarize_quotients(std::vector<std::pair<double, double>> q) {
  SurfaceEstimate s;
  s.quotients = std::move(q);
  if (s.quotients.empty()) return s;
  std::size_t m = s.quotients.size(), from = m >= 3 ? m - 3 : 0;
  double lo = kInf, hi = -kInf;
  for (std::size_t i = from; i < m; ++i) {
    lo = std::min(lo, s.quotients[i].second);
    hi = std::max(hi, s.quotients[i].second);
  }
  s.estimate = lo;
  s.within_band = hi - lo <= 0.2 * std::max(std::abs(lo), std::abs(hi));
  bool up = true, down = true;
  for (std::size_t i = 1; i < m; ++i) {
    double d = s.quotients[i].second - s.quotients[i - 1].second;
    double noise = 1e-12 * std::max(1.0, std::abs(s.quotients[i].second));
    if (d > noise) down = false;
    if (d < -noise) up = false;
  }
  s.trend = up || down ? Trend::monotone : Trend::oscillating;
  return s;
}

namespace {

SumSpec surface_spec(double p, const PowerVector& alphas, double eps, const SurfaceOptions& opt) {
  SumSpec spec;
  spec.p = p;
  spec.alphas = alphas;
  spec.form = CoefficientForm::t_free;
  spec.lambda_points = opt.lambda_points;
  spec.refine = opt.refine;
  spec.corner_lambdas = true;
  // The maximizing lambdas of A (+) eps B sit near eps, far below the uniform grid.
  for (int k = -8; k <= 8; ++k) {
    double l = eps * std::exp2(k / 4.0);
    if (l < 1) spec.extra_lambdas.push_back(l);
  }
  return spec;
}

double measure_of_sum(const SumResult& r, const DensityMeasure& mu) {
  if (mu.lebesgue) return r.volume;
  if (r.set.base_dims() == 1) return measure_of(r.envelope, mu);
  return measure_of(r.set, mu);
}

std::vector<double> base_spacing(const StaircaseSet& a, int refine) {
  std::vector<double> h = a.grid.spacing;
  for (auto& v : h) v /= double(refine);
  return h;
}

}  // namespace

double perturbed_measure(const StaircaseSet& a, const StaircaseSet& b, const DensityMeasure& mu, double eps, double p,
                         const PowerVector& alphas, const SurfaceOptions& opt) {
  if (!(p >= 1)) throw DomainError("surface areas need p >= 1");
  StaircaseSet be = scalar_dilate(b, eps, p, alphas);
  SumSpec spec = surface_spec(p, alphas, eps, opt);
  inject_volume_lambda(spec, a.volume(), be.volume());
  // Output spacing follows A; the dilated B has much finer cells.
  Grid out = output_grid(a, be, spec, base_spacing(a, opt.refine));
  return measure_of_sum(curvilinear_sum_grid(a, be, spec, out), mu);
}

SurfaceEstimate surface_area_sets(const StaircaseSet& a, const StaircaseSet& b, const DensityMeasure& mu, double p,
                                  const PowerVector& alphas, const SurfaceOptions& opt) {
  double base = measure_of(a, mu);
  std::vector<std::pair<double, double>> q;
  bool b_empty = b.empty();
  for (double eps : opt.eps) {
    double m = b_empty ? base : perturbed_measure(a, b, mu, eps, p, alphas, opt);
    q.emplace_back(eps, (m - base) / eps);
  }
  return summarize_quotients(std::move(q));
}

SurfaceEstimate surface_area_funcs(const GridFunction& f, const GridFunction& g, const DensityMeasure& mu, double p,
                                   const PowerVector& alphas, const SurfaceOptions& opt) {
  StaircaseSet hf = hypograph(f), hg = hypograph(g);
  double base = measure_of(hf, mu);
  std::vector<std::pair<double, double>> q;
  bool g_empty = hg.empty();
  for (double eps : opt.eps) {
    double m = base;
    if (!g_empty) {
      GridFunction ge = from_staircase(scalar_dilate(hg, eps, p, alphas));
      SumSpec spec = surface_spec(p, alphas, eps, opt);
      inject_volume_lambda(spec, f.integral(), ge.integral());
      Grid out = output_grid(hf, hypograph(ge), spec, base_spacing(hf, opt.refine));
      Convolution c = sup_convolve(f, ge, spec, out);
      if (mu.lebesgue) m = c.integral;
      else {
        SumResult r = curvilinear_sum_grid(hf, hypograph(ge), spec, out);
        m = measure_of_sum(r, mu);
      }
    }
    q.emplace_back(eps, (m - base) / eps);
  }
  return summarize_quotients(std::move(q));
}

SurfaceEstimate dilation_derivative(const StaircaseSet& a, const DensityMeasure& mu, double p,
                                    const PowerVector& alphas, const SurfaceOptions& opt) {
  double base = measure_of(a, mu);
  std::vector<std::pair<double, double>> q;
  for (double d : opt.eps) q.emplace_back(d, (base - measure_of(scalar_dilate(a, 1 - d, p, alphas), mu)) / d);
  return summarize_quotients(std::move(q));
}

namespace {

double sum_measure(const StaircaseSet& a, const StaircaseSet& b, const DensityMeasure& mu, SumSpec spec) {
  inject_volume_lambda(spec, a.volume(), b.volume());
  return measure_of_sum(curvilinear_sum_grid(a, b, spec), mu);
}

}  // namespace

Report f_concavity_check(const StaircaseSet& a, const StaircaseSet& b, const DensityMeasure& mu, const FSpec& F,
                         const SumSpec& spec, const std::vector<double>& t_samples) {
  Report r;
  r.check = "f_concavity";
  r.lambda_points = spec.lambda_points;
  double ma = measure_of(a, mu), mb = measure_of(b, mu);
  r.params["mu_a"] = ma;
  r.params["mu_b"] = mb;
  if (!(ma > 0) || !(mb > 0)) {
    r.params["trivial"] = true;
    settle(r);
    return r;
  }
  double hmin = kInf;
  for (std::size_t i = 0; i < a.base_dims(); ++i)
    hmin = std::min({hmin, a.grid.spacing[i], b.grid.spacing[i]});
  r.grid = hmin / double(spec.refine);
  bool first = true;
  for (double t : t_samples) {
    SumSpec s = spec;
    s.t = t;
    double lhs = sum_measure(a, b, mu, s);
    double rhs = F.inverse((1 - t) * F.forward(ma) + t * F.forward(mb));
    if (first || lhs - rhs < r.lhs - r.rhs) {
      r.lhs = lhs;
      r.rhs = rhs;
      r.params["t"] = t;
      first = false;
    }
  }
  r.tol = grid_tolerance(r.grid, r.rhs);
  settle(r);
  return r;
}

Report f_concavity_check(const GridFunction& f, const GridFunction& g, const DensityMeasure& mu, const FSpec& F,
                         const SumSpec& spec, const std::vector<double>& t_samples) {
  return f_concavity_check(hypograph(f), hypograph(g), mu, F, spec, t_samples);
}

Report minkowski_first_check(const StaircaseSet& a, const StaircaseSet& b, const DensityMeasure& mu, const FSpec& F,
                             double p, const PowerVector& alphas, const SurfaceOptions& opt) {
  Report r;
  r.check = "minkowski_first";
  r.lambda_points = opt.lambda_points;
  r.grid = a.grid.min_spacing() / double(opt.refine);
  double ma = measure_of(a, mu), mb = measure_of(b, mu);
  if (!(ma > 0)) {
    r.params["trivial"] = true;
    settle(r);
    return r;
  }
  SurfaceEstimate sab = surface_area_sets(a, b, mu, p, alphas, opt);
  SurfaceEstimate saa = surface_area_sets(a, a, mu, p, alphas, opt);
  r.lhs = sab.estimate;
  r.rhs = saa.estimate + (F.forward(mb) - F.forward(ma)) / F.derivative(ma);
  r.params["mu_a"] = ma;
  r.params["mu_b"] = mb;
  r.params["trend_ab"] = sab.trend == Trend::monotone ? "monotone" : "oscillating";
  r.params["trend_aa"] = saa.trend == Trend::monotone ? "monotone" : "oscillating";
  r.params["band_ok"] = sab.within_band && saa.within_band;
  r.tol = surface_tolerance(r.rhs);
  settle(r);
  return r;
}

MixedVolume mixed_volume_quantities(const StaircaseSet& a, const StaircaseSet& b, const DensityMeasure& mu,
                                    const FSpec& F, double p, const PowerVector& alphas, const SurfaceOptions& opt) {
  MixedVolume mv;
  mv.surface = surface_area_sets(a, b, mu, p, alphas, opt);
  mv.derivative = dilation_derivative(a, mu, p, alphas, opt);
  double f1 = F.derivative(1.0);
  mv.V = f1 * mv.surface.estimate;
  // Left derivative at 1: the finest quotient.
  double d = mv.derivative.quotients.empty() ? 0.0 : mv.derivative.quotients.back().second;
  mv.M = measure_of(a, mu) / f1 - d;
  return mv;
}

}  // namespace curvilin
