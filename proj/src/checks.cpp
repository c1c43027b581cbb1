#include <algorithm>
#include <cmath>

#include "curvilin/error.hpp"
#include "curvilin/verify.hpp"

namespace curvilin {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::refine: return "refine";
    case Verdict::fail: return "fail";
  }
  return "";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::pass;
  if (s == "refine") return Verdict::refine;
  if (s == "fail") return Verdict::fail;
  throw InputError("unknown verdict: " + s);
}

double grid_tolerance(double h, double rhs) { return kGridTolC * h * std::max(1.0, std::abs(rhs)); }
double surface_tolerance(double rhs) { return kSurfaceBand * std::max(1.0, std::abs(rhs)); }

void settle(Report& r) {
  r.slack = r.lhs - r.rhs;
  bool finite = std::isfinite(r.rhs) && (std::isfinite(r.lhs) || r.lhs > 0);
  r.verdict = finite && r.slack >= -r.tol ? Verdict::pass : Verdict::fail;
}

namespace {

double recip(double a) {
  if (std::isinf(a)) return 0.0;
  if (a == 0.0) return kInf;
  return 1.0 / a;
}

// alpha beta / (alpha + beta), with the limits at infinite or opposite arguments.
double gamma_pair(double a, double b) {
  if (std::isinf(a)) return b;
  if (std::isinf(b)) return a;
  if (a + b == 0.0) return a * b < 0 ? -kInf : 0.0;
  return a * b / (a + b);
}

double delta_of(double a, double b, int k) { return 1.0 / (recip(a) + recip(b) + double(k)); }

Json alphas_json(const PowerVector& v) {
  Json a = Json::array();
  for (double x : v.alphas) a.push_back(real_to_json(x));
  return a;
}

Report start(const char* id, const SumSpec& spec) {
  Report r;
  r.check = id;
  r.lambda_points = spec.lambda_points;
  r.params["p"] = spec.p;
  r.params["t"] = spec.t;
  r.params["alphas"] = alphas_json(spec.alphas);
  return r;
}

double out_spacing(const StaircaseSet& s) { return s.grid.min_spacing(); }

// Volume-level right-hand side of the curvilinear Brunn-Minkowski family.
double bm_rhs(double va, double vb, const SumSpec& spec, Report& r) {
  double g = spec.alphas.gamma();
  r.params["gamma"] = real_to_json(g);
  if (spec.alphas.main_branch()) {
    r.params["branch"] = "main";
    return mean_alpha(va, vb, spec.t, spec.p * g);
  }
  r.params["branch"] = "min";
  return sup_min_branch(va, vb, spec.p, spec.t, g);
}

CellMask level_mask(const StaircaseSet& normalized, double r) {
  CellMask m{normalized.grid, std::vector<std::uint8_t>(normalized.heights.size(), 0)};
  for (std::size_t c = 0; c < m.inside.size(); ++c)
    m.inside[c] = normalized.heights[c] > 0 && normalized.heights[c] >= r;
  return m;
}

Grid cover_grid(const Grid& a, const Grid& b, int refine) {
  std::size_t n = a.dims();
  std::vector<double> spacing(n);
  std::vector<std::size_t> shape(n);
  for (std::size_t i = 0; i < n; ++i) {
    spacing[i] = std::min(a.spacing[i], b.spacing[i]) / double(refine);
    double ext = std::max(a.upper(i, a.shape[i] - 1), b.upper(i, b.shape[i] - 1));
    shape[i] = std::size_t(std::ceil(ext / spacing[i] - 1e-9));
  }
  return Grid(std::vector<double>(n, 0.0), spacing, shape);
}

// int_0^1 V((1-t) ._p C_r(A) +_p t ._p C_r(B)) dr for normalized staircases:
// exact over the level breakpoints when there are few, else a 64-point midpoint rule.
double level_integral(const StaircaseSet& na, const StaircaseSet& nb, double p, double t, const Attempt& at,
                      Report& r) {
  std::vector<double> levels;
  for (double v : na.heights)
    if (v > 0) levels.push_back(v);
  for (double v : nb.heights)
    if (v > 0) levels.push_back(v);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  Grid out = cover_grid(na.grid, nb.grid, at.refine);
  auto F = [&](double lev) {
    CellMask x = level_mask(na, lev), y = level_mask(nb, lev);
    if (x.count() == 0 || y.count() == 0) return 0.0;
    return lp_minkowski_sum_base(x, y, p, t, at.lambda_points, out).volume;
  };
  double total = 0;
  if (levels.size() <= 256) {
    r.params["quadrature"] = "exact";
    double prev = 0;
    for (double lev : levels) {
      total += (lev - prev) * F(lev);
      prev = lev;
    }
  } else {
    r.params["quadrature"] = "midpoint64";
    for (int j = 0; j < 64; ++j) total += F((j + 0.5) / 64.0) / 64.0;
  }
  r.params["levels"] = levels.size();
  return total;
}

// Volume of the delta-sum of normalized sectional staircases (both branches).
double sectional_rhs(const StaircaseSet& ah, const StaircaseSet& bh, double p, double t, double alpha, double beta,
                     int k, const Attempt& at, Report& r, double* spacing) {
  double g = gamma_pair(alpha, beta), d = delta_of(alpha, beta, k);
  bool main = k == 0 || g >= -1.0 / double(k);
  r.params["gamma"] = real_to_json(g);
  r.params["delta"] = real_to_json(d);
  r.params["branch"] = main ? "main" : "quasi";
  std::size_t m = ah.base_dims();
  if (m == 0) {
    *spacing = 0;
    if (!main) return sup_min_branch(1.0, 1.0, p, t, d);
    SumSpec s;
    s.p = p;
    s.t = t;
    s.alphas = PowerVector({d});
    s.lambda_points = at.lambda_points;
    IntervalUnion unit{{{0.0, 1.0}}};
    return curvilinear_sum_1d(unit, unit, s).length();
  }
  SumSpec s;
  s.p = p;
  s.t = t;
  std::vector<double> al(m, 1.0);
  al.push_back(d);
  s.alphas = PowerVector(al);
  s.lambda_points = at.lambda_points;
  s.refine = at.refine;
  if (main) {
    inject_volume_lambda(s, ah.volume(), bh.volume());
    SumResult res = curvilinear_sum_grid(ah, bh, s);
    *spacing = out_spacing(res.set);
    return res.volume;
  }
  s.mode = SumMode::quasi_vertical;
  SumResult res = quasi_sum_grid(ah, bh, s);
  *spacing = out_spacing(res.set);
  return res.volume;
}

StaircaseSet normalized(const StaircaseSet& s) { return normalized_compression(s, 0); }

}  // namespace

Report run_refined(const std::function<Report(const Attempt&)>& check, Attempt base, int max_doublings) {
  Attempt a = base;
  Report r;
  for (int k = 0;; ++k) {
    try {
      r = check(a);
    } catch (const BudgetError& e) {
      r.verdict = Verdict::refine;
      r.params["budget"] = e.what();
      r.refinements = k;
      return r;
    }
    r.refinements = k;
    if (r.verdict == Verdict::pass || k == max_doublings) return r;
    if (a.refine * 2 > 64) {
      r.verdict = Verdict::refine;
      r.params["budget"] = "output resolution cap";
      return r;
    }
    a.lambda_points = 2 * a.lambda_points + 1;
    a.refine *= 2;
  }
}

Report check_mean_identity(double a, double b, double p, double t, double alpha, int grid_points) {
  Report r;
  r.check = "mean_identity";
  r.lambda_points = grid_points;
  r.params = {{"a", a}, {"b", b}, {"p", p}, {"t", t}, {"alpha", alpha}};
  auto lambdas = uniform_lambdas(grid_points);
  auto [best, idx] = grid_sup_mean(a, b, p, t, alpha, lambdas);
  r.lhs = best;
  r.rhs = mean_alpha(a, b, t, p * alpha);
  r.tol = 1e-6 * std::abs(r.rhs);
  settle(r);
  if (r.slack > r.tol) r.verdict = Verdict::fail;
  if (p != 1.0) {
    double star = optimal_lambda(a, b, p, t, alpha);
    double step = 1.0 / double(grid_points + 1);
    bool ok = std::abs(star - lambdas[idx]) <= step * (1 + 1e-9);
    r.params["lambda_star"] = star;
    r.params["lambda_grid"] = lambdas[idx];
    r.params["lambda_ok"] = ok;
    if (!ok) r.verdict = Verdict::fail;
  }
  return r;
}

Report check_holder(double a, double b, double c, double d, const MeanParams& params, double alpha, double beta) {
  Report r;
  r.check = "holder";
  r.params = {{"a", a}, {"b", b}, {"c", c}, {"d", d}, {"p", params.p}, {"t", params.t}, {"lambda", params.lambda},
              {"alpha", alpha}, {"beta", beta}};
  HolderBound hb = holder_product_bound(a, b, c, d, params, alpha, beta);
  r.params["branch"] = hb.branch == HolderBranch::sum_nonneg ? "sum_nonneg" : "mixed_sign";
  r.lhs = hb.lhs;
  r.rhs = hb.rhs;
  r.tol = 1e-12 * std::max(1.0, std::abs(hb.rhs));
  settle(r);
  return r;
}

Report check_lemma_1d(const IntervalUnion& k, const IntervalUnion& l, const SumSpec& spec) {
  Report r = start("lemma_1d", spec);
  double vk = volume(k), vl = volume(l);
  r.params["v_k"] = vk;
  r.params["v_l"] = vl;
  r.lhs = curvilinear_sum_1d(k, l, spec).length();
  r.rhs = sup_mean_over_lambda(vk, vl, spec.p, spec.t, spec.alphas.vertical());
  r.tol = kExactTol * std::max(1.0, std::abs(r.rhs));
  settle(r);
  return r;
}

Report check_compression_monotone(const BoxUnion& a, const BoxUnion& b, const SumSpec& spec) {
  Report r = start("compression", spec);
  StaircaseSet ca = compress(a), cb = compress(b);
  double gap = std::max(std::abs(volume(a) - ca.volume()), std::abs(volume(b) - cb.volume()));
  r.params["volume_gap"] = gap;
  SumSpec s = spec;
  inject_volume_lambda(s, ca.volume(), cb.volume());
  r.lhs = curvilinear_sum_volume(a, b, s);
  SumResult rc = curvilinear_sum_grid(ca, cb, s);
  r.rhs = rc.volume;
  r.grid = out_spacing(rc.set);
  r.tol = kExactTol * std::max(1.0, std::abs(r.rhs));
  settle(r);
  if (gap > 1e-12) r.verdict = Verdict::fail;
  return r;
}

Report check_bm_curvilinear(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec) {
  Report r = start("bm_curvilinear", spec);
  double va = a.volume(), vb = b.volume();
  SumSpec s = spec;
  inject_volume_lambda(s, va, vb);
  SumResult res = curvilinear_sum_grid(a, b, s);
  r.lhs = res.volume;
  r.rhs = bm_rhs(va, vb, spec, r);
  r.grid = out_spacing(res.set);
  r.tol = grid_tolerance(r.grid, r.rhs);
  settle(r);
  return r;
}

Report check_refinement(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec) {
  Report r = start("refinement", spec);
  StaircaseSet a0 = normalized(a), b0 = normalized(b);
  SumSpec s1 = spec;
  inject_volume_lambda(s1, a0.volume(), b0.volume());
  SumResult sum1 = curvilinear_sum_grid(a0, b0, s1);
  SumSpec s2 = spec;
  s2.alphas.alphas.back() = -kInf;
  SumResult sum2 = curvilinear_sum_grid(a0, b0, s2);
  Attempt at{spec.lambda_points, spec.refine};
  double integral = level_integral(a0, b0, spec.p, spec.t, at, r);
  double h = std::min(out_spacing(sum1.set), out_spacing(sum2.set));
  double tol1 = grid_tolerance(h, sum2.volume), tol2 = grid_tolerance(h, integral);
  double s_first = sum1.volume - sum2.volume, s_second = sum2.volume - integral;
  r.params["v_alpha"] = sum1.volume;
  r.params["v_min"] = sum2.volume;
  r.params["level_integral"] = integral;
  r.params["slack_first"] = s_first;
  r.params["slack_second"] = s_second;
  r.grid = h;
  // Report the weaker link of the chain.
  if (s_first + tol1 <= s_second + tol2) {
    r.params["link"] = "first";
    r.lhs = sum1.volume;
    r.rhs = sum2.volume;
    r.tol = tol1;
  } else {
    r.params["link"] = "second";
    r.lhs = sum2.volume;
    r.rhs = integral;
    r.tol = tol2;
  }
  settle(r);
  return r;
}

Report check_normalized_bm(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec) {
  Report r = start("normalized_bm", spec);
  double alpha = spec.alphas.vertical();
  SumSpec s = spec;
  inject_volume_lambda(s, a.volume(), b.volume());
  SumResult sum = curvilinear_sum_grid(a, b, s);
  double factor = mean_alpha(1.0 / a.max_height(), 1.0 / b.max_height(), spec.t, -spec.p * alpha);
  r.lhs = sum.volume * factor;
  Attempt at{spec.lambda_points, spec.refine};
  r.rhs = level_integral(normalized(a), normalized(b), spec.p, spec.t, at, r);
  r.params["volume"] = sum.volume;
  r.params["factor"] = factor;
  r.grid = out_spacing(sum.set);
  r.tol = grid_tolerance(r.grid, r.rhs);
  settle(r);
  return r;
}

namespace {

Report sectional_core(const char* id, const StaircaseSet& a, const StaircaseSet& b, const SectionProfile& pa,
                      const SectionProfile& pb, double lhs_volume, double lhs_spacing, const SumSpec& spec,
                      double beta, int k) {
  Report r = start(id, spec);
  r.params["beta"] = beta;
  r.params["k"] = k;
  double factor = mean_alpha(1.0 / pa.sup_norm, 1.0 / pb.sup_norm, spec.t, spec.p * beta);
  r.lhs = lhs_volume * factor;
  StaircaseSet ah{pa.grid, pa.values}, bh{pb.grid, pb.values};
  for (auto& v : ah.heights) v /= pa.sup_norm;
  for (auto& v : bh.heights) v /= pb.sup_norm;
  Attempt at{spec.lambda_points, spec.refine};
  double h2 = 0;
  r.rhs = sectional_rhs(ah, bh, spec.p, spec.t, spec.alphas.vertical(), beta, k, at, r, &h2);
  r.params["volume"] = lhs_volume;
  r.params["factor"] = factor;
  r.grid = h2 > 0 ? std::min(lhs_spacing, h2) : lhs_spacing;
  r.tol = grid_tolerance(r.grid, r.rhs);
  settle(r);
  (void)a;
  (void)b;
  return r;
}

}  // namespace

Report check_sectional(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec, double beta, int k) {
  if (spec.alphas.alphas.back() + beta < 0) throw DomainError("sectional checks need alpha + beta >= 0");
  SumSpec s = spec;
  inject_volume_lambda(s, a.volume(), b.volume());
  SumResult sum = curvilinear_sum_grid(a, b, s);
  return sectional_core("sectional", a, b, section_profile(a, k), section_profile(b, k), sum.volume,
                        out_spacing(sum.set), spec, beta, k);
}

Report check_bbl(const GridFunction& f, const GridFunction& g, const SumSpec& spec) {
  Report r = start("bbl", spec);
  double jf = f.integral(), jg = g.integral();
  SumSpec s = spec;
  inject_volume_lambda(s, jf, jg);
  Convolution h = bbl_min_witness(f, g, s);
  r.lhs = h.integral;
  r.rhs = bm_rhs(jf, jg, spec, r);
  r.grid = h.h.grid.min_spacing();
  r.tol = grid_tolerance(r.grid, r.rhs);
  settle(r);
  return r;
}

Report check_marginal_bbl(const GridFunction& f, const GridFunction& g, const SumSpec& spec, double beta, int k) {
  if (spec.alphas.alphas.back() + beta < 0) throw DomainError("marginal checks need alpha + beta >= 0");
  SumSpec s = spec;
  inject_volume_lambda(s, f.integral(), g.integral());
  Convolution h = bbl_min_witness(f, g, s);
  Marginal mf = marginal(f, k), mg = marginal(g, k);
  SectionProfile pf{k, mf.grid, mf.values, mf.norm}, pg{k, mg.grid, mg.values, mg.norm};
  return sectional_core("marginal_bbl", hypograph(f), hypograph(g), pf, pg, h.integral, h.h.grid.min_spacing(), spec,
                        beta, k);
}

Report check_measure_bm(const CellMask& a, const CellMask& b, const DensityMeasure& mu, const SumSpec& spec,
                        double beta, int k) {
  if (!mu.alpha) throw DomainError("measure checks need a declared concavity");
  double alpha = *mu.alpha;
  if (alpha + beta < 0) throw DomainError("measure checks need alpha + beta >= 0");
  std::size_t n = a.grid.dims();
  if (k < 0 || std::size_t(k) >= n) throw DomainError("measure checks need 0 <= k < n");
  Report r = start("measure_bm", spec);
  r.params["density_alpha"] = real_to_json(alpha);
  r.params["beta"] = beta;
  r.params["k"] = k;
  double ma = measure_of(a, mu), mb = measure_of(b, mu);
  r.params["mu_a"] = ma;
  r.params["mu_b"] = mb;
  BaseSum sum = lp_minkowski_sum_base(a, b, spec.p, spec.t, spec.lambda_points, mu.density.grid);
  double msum = measure_of(sum.cells, mu);
  // Sections need the sets on the density grid; the sum itself is taken at the sets' own resolution.
  auto on_density_grid = [&](const CellMask& m) {
    if (m.grid == mu.density.grid) return m;
    auto factor = std::size_t(std::lround(m.grid.spacing[0] / mu.density.grid.spacing[0]));
    StaircaseSet up = subdivide(indicator(m), factor);
    CellMask f{up.grid, std::vector<std::uint8_t>(up.heights.size(), 0)};
    for (std::size_t c = 0; c < f.inside.size(); ++c) f.inside[c] = up.heights[c] > 0;
    if (!(f.grid == mu.density.grid)) throw DomainError("sets must refine onto the density grid");
    return f;
  };
  SectionMeasure sa = mu_section_quantities(on_density_grid(a), mu, k);
  SectionMeasure sb = mu_section_quantities(on_density_grid(b), mu, k);
  double factor = mean_alpha(1.0 / sa.sup, 1.0 / sb.sup, spec.t, spec.p * beta);
  r.lhs = msum * factor;
  r.params["mu_sum"] = msum;
  r.params["factor"] = factor;
  StaircaseSet na{sa.grid, sa.values}, nb{sb.grid, sb.values};
  for (auto& v : na.heights) v /= sa.sup;
  for (auto& v : nb.heights) v /= sb.sup;
  double g = gamma_pair(alpha, beta), d = delta_of(alpha, beta, k);
  bool main = k == 0 || g >= -1.0 / double(k);
  r.params["gamma"] = real_to_json(g);
  r.params["delta"] = real_to_json(d);
  r.params["branch"] = main ? "main" : "quasi";
  Attempt at{spec.lambda_points, spec.refine};
  double h2 = 0;
  if (main) {
    r.rhs = level_integral(na, nb, spec.p, spec.t, at, r);
    h2 = na.grid.min_spacing() / double(at.refine);
  } else {
    r.rhs = sectional_rhs(na, nb, spec.p, spec.t, alpha, beta, k, at, r, &h2);
  }
  r.grid = std::min(mu.density.grid.min_spacing(), h2);
  r.tol = grid_tolerance(r.grid, r.rhs);
  settle(r);
  return r;
}

namespace {

Report surface_report(const char* id, double p, const PowerVector& alphas, const SurfaceOptions& opt) {
  Report r;
  r.check = id;
  r.lambda_points = opt.lambda_points;
  r.params["p"] = p;
  r.params["alphas"] = alphas_json(alphas);
  r.params["gamma"] = alphas.gamma();
  return r;
}

const char* trend_name(Trend t) { return t == Trend::monotone ? "monotone" : "oscillating"; }

}  // namespace

Report check_minkowski_first(const StaircaseSet& a, const StaircaseSet& b, double p, const PowerVector& alphas,
                             const SurfaceOptions& opt) {
  FSpec F = FSpec::power(p * alphas.gamma());
  Report inner = minkowski_first_check(a, b, lebesgue_measure(a.grid), F, p, alphas, opt);
  Report r = surface_report("minkowski_first", p, alphas, opt);
  for (auto& [key, v] : inner.params.items()) r.params[key] = v;
  r.lhs = inner.lhs;
  r.rhs = inner.rhs;
  r.tol = inner.tol;
  r.grid = inner.grid;
  settle(r);
  return r;
}

Report check_minkowski_first_funcs(const GridFunction& f, const GridFunction& g, double p, const PowerVector& alphas,
                                   const SurfaceOptions& opt) {
  Report r = surface_report("minkowski_first_funcs", p, alphas, opt);
  FSpec F = FSpec::power(p * alphas.gamma());
  DensityMeasure mu = lebesgue_measure(f.grid);
  double jf = f.integral(), jg = g.integral();
  SurfaceEstimate sfg = surface_area_funcs(f, g, mu, p, alphas, opt);
  SurfaceEstimate sff = surface_area_funcs(f, f, mu, p, alphas, opt);
  r.lhs = sfg.estimate;
  r.rhs = sff.estimate + (F.forward(jg) - F.forward(jf)) / F.derivative(jf);
  r.params["trend_ab"] = trend_name(sfg.trend);
  r.params["trend_aa"] = trend_name(sff.trend);
  r.params["band_ok"] = sfg.within_band && sff.within_band;
  r.grid = f.grid.min_spacing() / double(opt.refine);
  r.tol = surface_tolerance(r.rhs);
  settle(r);
  return r;
}

Report check_mixed_volume(const StaircaseSet& a, const StaircaseSet& b, double p, const PowerVector& alphas,
                          const SurfaceOptions& opt) {
  Report r = surface_report("mixed_volume", p, alphas, opt);
  FSpec F = FSpec::power(p * alphas.gamma());
  DensityMeasure mu = lebesgue_measure(a.grid);
  MixedVolume mv = mixed_volume_quantities(a, b, mu, F, p, alphas, opt);
  double f1 = F.derivative(1.0), ma = a.volume(), mb = b.volume();
  r.lhs = mv.V + f1 * mv.M;
  r.rhs = f1 * (F.forward(mb) - F.forward(ma)) / F.derivative(ma) + ma;
  r.params["V"] = mv.V;
  r.params["M"] = mv.M;
  r.params["trend_ab"] = trend_name(mv.surface.trend);
  r.params["band_ok"] = mv.surface.within_band;
  r.grid = a.grid.min_spacing() / double(opt.refine);
  r.tol = surface_tolerance(r.rhs);
  settle(r);
  return r;
}

Report check_power_monotonicity(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& inner,
                                const SumSpec& outer) {
  Report r = start("power_monotonicity", inner);
  r.params["outer_alphas"] = alphas_json(outer.alphas);
  r.params["mode"] = inner.mode == SumMode::curvilinear ? "curvilinear" : "quasi";
  auto run = [&](const SumSpec& s, const std::optional<Grid>& g) {
    return s.mode == SumMode::curvilinear ? curvilinear_sum_grid(a, b, s, g) : quasi_sum_grid(a, b, s, g);
  };
  SumResult ri = run(inner, std::nullopt), ro = run(outer, std::nullopt);
  std::size_t n = a.base_dims();
  std::vector<double> spacing = ri.set.grid.spacing;
  std::vector<std::size_t> shape(n);
  for (std::size_t i = 0; i < n; ++i) shape[i] = std::max(ri.set.grid.shape[i], ro.set.grid.shape[i]);
  Grid g(std::vector<double>(n, 0.0), spacing, shape);
  ri = run(inner, g);
  ro = run(outer, g);
  // Outer heights dilated by one cell in every base direction.
  std::vector<double> dil(g.cells(), 0.0);
  for (std::size_t c = 0; c < g.cells(); ++c) {
    auto idx = g.unflatten(c);
    double m = 0;
    if (n == 1) {
      for (long d = -1; d <= 1; ++d) {
        long j = long(idx[0]) + d;
        if (j >= 0 && j < long(shape[0])) m = std::max(m, ro.set.heights[std::size_t(j)]);
      }
    } else {
      for (long d0 = -1; d0 <= 1; ++d0)
        for (long d1 = -1; d1 <= 1; ++d1) {
          long i = long(idx[0]) + d0, j = long(idx[1]) + d1;
          if (i >= 0 && j >= 0 && i < long(shape[0]) && j < long(shape[1]))
            m = std::max(m, ro.set.heights[std::size_t(i) * shape[1] + std::size_t(j)]);
        }
    }
    dil[c] = m;
  }
  double worst = 0, top = 0;
  for (std::size_t c = 0; c < g.cells(); ++c) {
    top = std::max(top, ri.set.heights[c]);
    if (ri.set.heights[c] > 0) worst = std::min(worst, dil[c] - ri.set.heights[c]);
  }
  r.lhs = worst;
  r.rhs = 0;
  r.grid = g.min_spacing();
  r.tol = 1e-12 * std::max(1.0, top);
  settle(r);
  return r;
}

}  // namespace curvilin
