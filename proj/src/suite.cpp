#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "curvilin/error.hpp"
#include "curvilin/verify.hpp"

namespace curvilin {

namespace {

template <class T>
T param(const Json& params, const char* key, T fallback) {
  if (params.contains(key)) return params.at(key).get<T>();
  return fallback;
}

double pick(Rng& rng, const Json& params, const char* key, std::vector<double> fallback) {
  std::vector<double> choices = params.contains(key) ? params.at(key).get<std::vector<double>>() : fallback;
  return choices[std::size_t(rng.integer(0, int(choices.size()) - 1))];
}

double p_of(Rng& rng, const Json& params) {
  if (params.contains("p")) return params.at("p").get<double>();
  return pick(rng, params, "p_choices", {1.0, 1.5, 2.0, 3.0});
}

double t_of(Rng& rng) { return std::round(rng.uniform(0.05, 0.95) * 64) / 64; }

Json alphas_json(const std::vector<double>& a) {
  Json j = Json::array();
  for (double x : a) j.push_back(real_to_json(x));
  return j;
}

std::vector<double> alphas_from(const Json& j) {
  std::vector<double> a;
  for (const auto& x : j) a.push_back(real_from_json(x));
  return a;
}

SumSpec spec_from(const Json& inst, const Attempt& at) {
  SumSpec s;
  s.p = inst.at("p").get<double>();
  s.t = inst.value("t", 0.5);
  s.alphas = PowerVector(alphas_from(inst.at("alphas")));
  s.lambda_points = at.lambda_points;
  s.refine = at.refine;
  return s;
}

StaircaseSet stair_gen(Rng& rng, const Json& params, std::size_t n, std::size_t cells, int levels) {
  cells = param<std::size_t>(params, "cells", cells);
  double range = param<double>(params, "range", 2.0);
  double h = std::exp2(std::round(std::log2(range / double(cells))));
  return random_staircase(rng, n, cells, h, param<double>(params, "max_height", 2.0), param<int>(params, "levels", levels),
                          param<double>(params, "fill", 0.7));
}

// Vertical exponent for the volume-level families. The branch threshold is -1/n
// for unit base exponents; min-branch draws sit strictly below it.
double vertical_alpha(Rng& rng, const std::string& branch, std::size_t n) {
  double threshold = -1.0 / double(n);
  if (branch == "min") return threshold * (1.0 + 2.0 * rng.uniform(0.1, 1.0));
  if (rng.coin(0.25)) return threshold * rng.uniform(0.05, 0.9);
  return rng.uniform(0.05, 1.0);
}

Json sets_instance(const StaircaseSet& a, const StaircaseSet& b, double p, double t, const std::vector<double>& alphas) {
  return Json{{"p", p}, {"t", t}, {"alphas", alphas_json(alphas)}, {"a", to_json(a)}, {"b", to_json(b)}};
}

Json funcs_instance(const GridFunction& f, const GridFunction& g, double p, double t,
                    const std::vector<double>& alphas) {
  return Json{{"p", p}, {"t", t}, {"alphas", alphas_json(alphas)}, {"f", to_json(f)}, {"g", to_json(g)}};
}

double beta_for(Rng& rng, double alpha, const Json& params) {
  double lo = std::isinf(alpha) ? -1.0 : -std::min(alpha, 1.0);
  lo = std::max(lo, param<double>(params, "beta_min", lo));
  double b = rng.uniform(lo, 1.0);
  if (std::abs(b) < 1e-3) b = 0.5;
  return b;
}

DensityMeasure density_from_json(const Json& j, const Grid& box) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "lebesgue") {
    DensityMeasure mu = lebesgue_measure(box);
    mu.alpha = kInf;
    return mu;
  }
  if (kind == "affine") return affine_density(box, j.at("radius").get<double>());
  if (kind == "gaussian")
    return gaussian_density(box, j.at("center").get<std::vector<double>>(), j.at("sigma").get<double>());
  if (kind == "indicator") {
    Box s;
    s.lo = {0.0, 0.0};
    s.hi = j.at("hi").get<std::vector<double>>();
    return convex_indicator_density(box, s);
  }
  throw InputError("unknown density kind: " + kind);
}

CellMask mask_from_json(const Json& j) {
  StaircaseSet s = staircase_from_json(j);
  CellMask m{s.grid, std::vector<std::uint8_t>(s.heights.size(), 0)};
  for (std::size_t c = 0; c < m.inside.size(); ++c) m.inside[c] = s.heights[c] > 0;
  return m;
}

Grid unit_square(std::size_t cells) { return Grid::uniform(2, 1.0 / double(cells), cells); }

std::vector<CheckDef> build_registry() {
  std::vector<CheckDef> r;

  r.push_back({"mean_identity",
               [](Rng& rng, const Json& pr) {
                 int points = param<int>(pr, "grid_points", 10000);
                 // interior: keep lambda* at least `interior` grid steps away from both ends.
                 int margin = param<int>(pr, "interior", 0);
                 for (;;) {
                   double a = rng.uniform(0.1, 10), b = rng.uniform(0.1, 10), p = rng.uniform(1, 4);
                   double t = rng.uniform(0.05, 0.95), alpha = rng.uniform(0.05, 1);
                   double star = optimal_lambda(a, b, p, t, alpha), edge = double(margin) / double(points + 1);
                   if (margin > 0 && (star < edge || star > 1 - edge)) continue;
                   return Json{{"a", a}, {"b", b}, {"p", p}, {"t", t}, {"alpha", alpha}, {"grid_points", points}};
                 }
               },
               [](const Json& i, const Attempt&) {
                 return check_mean_identity(i.at("a"), i.at("b"), i.at("p"), i.at("t"), i.at("alpha"),
                                            i.at("grid_points"));
               }});

  r.push_back({"holder",
               [](Rng& rng, const Json&) {
                 double alpha, beta;
                 if (rng.coin(0.5)) {
                   alpha = rng.uniform(-3, 3);
                   if (std::abs(alpha) < 0.05) alpha = 0.5;
                   beta = rng.uniform(std::max(-alpha, -3.0), 3.0);
                   if (std::abs(beta) < 0.05) beta = 0.7;
                 } else {
                   alpha = rng.uniform(0.1, 3);
                   beta = -alpha * rng.uniform(1.1, 3);
                 }
                 return Json{{"a", rng.uniform(0.1, 10)}, {"b", rng.uniform(0.1, 10)}, {"c", rng.uniform(0.1, 10)},
                             {"d", rng.uniform(0.1, 10)}, {"p", rng.uniform(1, 4)},     {"t", rng.uniform(0.05, 0.95)},
                             {"lambda", rng.uniform(0.01, 0.99)}, {"alpha", alpha},     {"beta", beta}};
               },
               [](const Json& i, const Attempt&) {
                 MeanParams mp{i.at("p"), i.at("t"), i.at("lambda")};
                 return check_holder(i.at("a"), i.at("b"), i.at("c"), i.at("d"), mp, i.at("alpha"), i.at("beta"));
               }});

  r.push_back({"lemma_1d",
               [](Rng& rng, const Json& pr) {
                 int m = param<int>(pr, "max_intervals", 3);
                 double range = param<double>(pr, "range", 4.0);
                 IntervalUnion k = random_interval_union(rng, m, range), l = random_interval_union(rng, m, range);
                 return Json{{"p", p_of(rng, pr)}, {"t", t_of(rng)}, {"alphas", alphas_json({rng.uniform(0.05, 1)})},
                             {"k", to_json(k)},    {"l", to_json(l)}};
               },
               [](const Json& i, const Attempt& at) {
                 return check_lemma_1d(interval_union_from_json(i.at("k")), interval_union_from_json(i.at("l")),
                                       spec_from(i, at));
               }});

  r.push_back({"compression",
               [](Rng& rng, const Json& pr) {
                 int m = param<int>(pr, "max_boxes", 4);
                 double range = param<double>(pr, "range", 2.0);
                 BoxUnion a = random_box_union(rng, 2, m, range), b = random_box_union(rng, 2, m, range);
                 return Json{{"p", p_of(rng, pr)}, {"t", t_of(rng)}, {"alphas", alphas_json({1.0, rng.uniform(0.05, 1)})},
                             {"a", to_json(a)},    {"b", to_json(b)}};
               },
               [](const Json& i, const Attempt& at) {
                 return check_compression_monotone(box_union_from_json(i.at("a")), box_union_from_json(i.at("b")),
                                                   spec_from(i, at));
               }});

  r.push_back({"bm_curvilinear",
               [](Rng& rng, const Json& pr) {
                 std::size_t n = param<std::size_t>(pr, "n", 1);
                 std::string branch = param<std::string>(pr, "branch", rng.coin(0.5) ? "main" : "min");
                 std::vector<double> al(n, 1.0);
                 al.push_back(vertical_alpha(rng, branch, n));
                 StaircaseSet a = stair_gen(rng, pr, n, n == 1 ? 64 : 8, 0), b = stair_gen(rng, pr, n, n == 1 ? 64 : 8, 0);
                 return sets_instance(a, b, p_of(rng, pr), t_of(rng), al);
               },
               [](const Json& i, const Attempt& at) {
                 return check_bm_curvilinear(staircase_from_json(i.at("a")), staircase_from_json(i.at("b")),
                                             spec_from(i, at));
               }});

  auto level_family = [](const char* id, std::size_t n_default, std::size_t cells,
                         Report (*fn)(const StaircaseSet&, const StaircaseSet&, const SumSpec&)) {
    return CheckDef{id,
                    [=](Rng& rng, const Json& pr) {
                      std::size_t n = param<std::size_t>(pr, "n", n_default);
                      std::vector<double> al(n, 1.0);
                      al.push_back(rng.uniform(0.05, 1));
                      StaircaseSet a = stair_gen(rng, pr, n, cells, 6), b = stair_gen(rng, pr, n, cells, 6);
                      return sets_instance(a, b, p_of(rng, pr), t_of(rng), al);
                    },
                    [=](const Json& i, const Attempt& at) {
                      return fn(staircase_from_json(i.at("a")), staircase_from_json(i.at("b")), spec_from(i, at));
                    }};
  };
  r.push_back(level_family("refinement", 1, 32, &check_refinement));
  r.push_back(level_family("normalized_bm", 1, 32, &check_normalized_bm));

  r.push_back({"sectional",
               [](Rng& rng, const Json& pr) {
                 double alpha = rng.uniform(0.05, 1);
                 StaircaseSet a = stair_gen(rng, pr, 2, 8, 4), b = stair_gen(rng, pr, 2, 8, 4);
                 Json j = sets_instance(a, b, p_of(rng, pr), t_of(rng), {1.0, 1.0, alpha});
                 j["beta"] = beta_for(rng, alpha, pr);
                 j["k"] = param<int>(pr, "k", 1);
                 return j;
               },
               [](const Json& i, const Attempt& at) {
                 return check_sectional(staircase_from_json(i.at("a")), staircase_from_json(i.at("b")),
                                        spec_from(i, at), i.at("beta"), i.at("k"));
               }});

  r.push_back({"bbl",
               [](Rng& rng, const Json& pr) {
                 std::string branch = param<std::string>(pr, "branch", rng.coin(0.5) ? "main" : "min");
                 std::vector<double> al{1.0, vertical_alpha(rng, branch, 1)};
                 GridFunction f = from_staircase(stair_gen(rng, pr, 1, 64, 0));
                 GridFunction g = from_staircase(stair_gen(rng, pr, 1, 64, 0));
                 return funcs_instance(f, g, p_of(rng, pr), t_of(rng), al);
               },
               [](const Json& i, const Attempt& at) {
                 return check_bbl(grid_function_from_json(i.at("f")), grid_function_from_json(i.at("g")),
                                  spec_from(i, at));
               }});

  r.push_back({"marginal_bbl",
               [](Rng& rng, const Json& pr) {
                 double alpha = rng.uniform(0.05, 1);
                 GridFunction f = from_staircase(stair_gen(rng, pr, 2, 8, 4));
                 GridFunction g = from_staircase(stair_gen(rng, pr, 2, 8, 4));
                 Json j = funcs_instance(f, g, p_of(rng, pr), t_of(rng), {1.0, 1.0, alpha});
                 j["beta"] = beta_for(rng, alpha, pr);
                 j["k"] = param<int>(pr, "k", 1);
                 return j;
               },
               [](const Json& i, const Attempt& at) {
                 return check_marginal_bbl(grid_function_from_json(i.at("f")), grid_function_from_json(i.at("g")),
                                           spec_from(i, at), i.at("beta"), i.at("k"));
               }});

  r.push_back({"measure_bm",
               [](Rng& rng, const Json& pr) {
                 std::size_t coarse = param<std::size_t>(pr, "cells", 8);
                 Grid fine = unit_square(coarse * 4);
                 const char* kinds[] = {"lebesgue", "affine", "gaussian", "indicator"};
                 std::string kind = param<std::string>(pr, "density", kinds[rng.integer(0, 3)]);
                 Json dj{{"kind", kind}};
                 double alpha = kInf;
                 if (kind == "affine") {
                   dj["radius"] = rng.uniform(1.0, 2.0);
                   alpha = 1;
                 } else if (kind == "gaussian") {
                   dj["center"] = {rng.uniform(0, 1), rng.uniform(0, 1)};
                   dj["sigma"] = rng.uniform(0.3, 1.0);
                   alpha = 0;
                 } else if (kind == "indicator") {
                   dj["hi"] = {std::round(rng.uniform(0.5, 1) * 8) / 8, std::round(rng.uniform(0.5, 1) * 8) / 8};
                 }
                 DensityMeasure mu = density_from_json(dj, fine);
                 auto gen_mask = [&] {
                   for (;;) {
                     CellMask m = random_cell_mask(rng, unit_square(coarse), param<double>(pr, "fill", 0.5));
                     if (measure_of(m, mu) > 0) return indicator(m);
                   }
                 };
                 StaircaseSet a = gen_mask(), b = gen_mask();
                 double beta = alpha == 0 ? rng.uniform(0.05, 1) : beta_for(rng, alpha, pr);
                 return Json{{"p", p_of(rng, pr)}, {"t", t_of(rng)}, {"alphas", alphas_json({1.0, 1.0})},
                             {"density", dj},      {"beta", beta},     {"k", param<int>(pr, "k", 1)},
                             {"a", to_json(a)},    {"b", to_json(b)}};
               },
               [](const Json& i, const Attempt& at) {
                 CellMask a = mask_from_json(i.at("a")), b = mask_from_json(i.at("b"));
                 std::size_t fine = a.grid.shape[0] * std::size_t(i.value("density_factor", 4));
                 DensityMeasure mu = density_from_json(i.at("density"), unit_square(fine));
                 return check_measure_bm(a, b, mu, spec_from(i, at), i.at("beta"), i.at("k"));
               }});

  auto surface_family = [](const char* id, bool same, bool funcs) {
    return CheckDef{id,
                    [=](Rng& rng, const Json& pr) {
                      std::size_t n = param<std::size_t>(pr, "n", 1);
                      std::vector<double> al;
                      for (std::size_t i = 0; i <= n; ++i) al.push_back(std::round(rng.uniform(0.25, 1) * 16) / 16);
                      double p = pick(rng, pr, "p_choices", {1.0, 2.0, 3.0});
                      // Down-sets: for p > 1 the union over lambda contains shrunk copies of A, so the
                      // quotients only converge when A is closed under coordinatewise shrinking.
                      std::size_t cells = param<std::size_t>(pr, "cells", n == 1 ? 16 : 6);
                      bool boxes = param<std::string>(pr, "shape", "down_set") == "box";
                      auto gen = [&] {
                        return boxes ? random_box_staircase(rng, n, cells, 0.125, 2.0)
                                     : random_down_set(rng, n, cells, 0.125, 2.0);
                      };
                      StaircaseSet a = gen();
                      StaircaseSet b = same ? a : gen();
                      if (funcs) return funcs_instance(from_staircase(a), from_staircase(b), p, 0.5, al);
                      return sets_instance(a, b, p, 0.5, al);
                    },
                    [=](const Json& i, const Attempt& at) {
                      SurfaceOptions opt;
                      opt.lambda_points = at.lambda_points;
                      opt.refine = at.refine;
                      PowerVector al(alphas_from(i.at("alphas")));
                      double p = i.at("p");
                      Report rep;
                      if (funcs) {
                        rep = check_minkowski_first_funcs(grid_function_from_json(i.at("f")),
                                                          grid_function_from_json(i.at("g")), p, al, opt);
                      } else {
                        StaircaseSet a = staircase_from_json(i.at("a")), b = staircase_from_json(i.at("b"));
                        rep = std::string(id) == "mixed_volume" ? check_mixed_volume(a, b, p, al, opt)
                                                                : check_minkowski_first(a, b, p, al, opt);
                      }
                      rep.check = id;
                      return rep;
                    }};
  };
  r.push_back(surface_family("minkowski_first", false, false));
  r.push_back(surface_family("isoperimetric", true, false));
  r.push_back(surface_family("mixed_volume", false, false));
  r.push_back(surface_family("minkowski_first_funcs", false, true));

  r.push_back({"power_monotonicity",
               [](Rng& rng, const Json& pr) {
                 const char* modes[] = {"curvilinear", "quasi", "quasi_p_lt_1"};
                 std::string mode = param<std::string>(pr, "mode", modes[rng.integer(0, 2)]);
                 std::size_t n = param<std::size_t>(pr, "n", 1);
                 std::size_t cells = param<std::size_t>(pr, "cells", n == 1 ? 16 : 6);
                 StaircaseSet a = random_down_set(rng, n, cells, 0.125, 2.0);
                 StaircaseSet b = random_down_set(rng, n, cells, 0.125, 2.0);
                 std::vector<double> big, small;
                 for (std::size_t i = 0; i <= n; ++i) {
                   double x = rng.uniform(0.3, 1);
                   big.push_back(x);
                   small.push_back(x * rng.uniform(0.2, 0.9));
                 }
                 double p = mode == "quasi_p_lt_1" ? rng.uniform(0.3, 0.9) : p_of(rng, pr);
                 bool reversed = mode == "quasi_p_lt_1";
                 return Json{{"mode", mode},
                             {"p", p},
                             {"t", t_of(rng)},
                             {"inner", alphas_json(reversed ? big : small)},
                             {"outer", alphas_json(reversed ? small : big)},
                             {"a", to_json(a)},
                             {"b", to_json(b)}};
               },
               [](const Json& i, const Attempt& at) {
                 std::string mode = i.at("mode");
                 SumSpec s;
                 s.p = i.at("p");
                 s.t = i.at("t");
                 s.lambda_points = at.lambda_points;
                 s.refine = at.refine;
                 s.pair_lambdas = false;
                 s.mode = mode == "curvilinear" ? SumMode::curvilinear : SumMode::quasi;
                 if (mode == "quasi_p_lt_1") s.form = CoefficientForm::t_free;
                 SumSpec inner = s, outer = s;
                 inner.alphas = PowerVector(alphas_from(i.at("inner")));
                 outer.alphas = PowerVector(alphas_from(i.at("outer")));
                 Report rep = check_power_monotonicity(staircase_from_json(i.at("a")), staircase_from_json(i.at("b")),
                                                       inner, outer);
                 rep.params["mode"] = mode;
                 return rep;
               }});
  return r;
}

}  // namespace

const std::vector<CheckDef>& check_registry() {
  static const std::vector<CheckDef> reg = build_registry();
  return reg;
}

const CheckDef& find_check(const std::string& id) {
  for (const auto& d : check_registry())
    if (d.id == id) return d;
  throw InputError("unknown check: " + id);
}

Report run_instance(const CheckDef& def, const Json& params, std::uint64_t seed, std::size_t index, Attempt base) {
  std::uint64_t s = instance_seed(seed, def.id, index);
  Rng rng(s);
  Json inst;
  Report r;
  try {
    inst = def.generate(rng, params);
    r = run_refined([&](const Attempt& at) { return def.run(inst, at); }, base);
  } catch (const std::exception& e) {
    r = Report{};
    r.check = def.id;
    r.verdict = Verdict::fail;
    r.params["error"] = e.what();
  }
  r.check = def.id;
  r.seed = s;
  r.params["index"] = index;
  return r;
}

Json shrink(const std::function<Report(const Json&)>& check, const Json& instance) {
  auto fails = [&](const Json& j) {
    try {
      return check(j).verdict == Verdict::fail;
    } catch (const std::exception&) {
      return false;
    }
  };
  Json cur = instance;
  if (!fails(cur)) return cur;
  // Candidate reductions of one component: drop a piece or zero one cell.
  auto candidates = [](const Json& j) {
    std::vector<Json> out;
    for (const char* list : {"boxes", "intervals"})
      if (j.contains(list) && j.at(list).size() > 1)
        for (std::size_t i = 0; i < j.at(list).size(); ++i) {
          Json c = j;
          c[list].erase(i);
          out.push_back(c);
        }
    for (const char* cells : {"heights", "values"})
      if (j.contains(cells)) {
        std::size_t nonzero = 0;
        for (const auto& v : j.at(cells)) nonzero += v.get<double>() > 0;
        if (nonzero > 1)
          for (std::size_t i = 0; i < j.at(cells).size(); ++i)
            if (j.at(cells)[i].get<double>() > 0) {
              Json c = j;
              c[cells][i] = 0.0;
              out.push_back(c);
            }
      }
    return out;
  };
  for (int round = 0; round < 500; ++round) {
    bool progress = false;
    for (const char* key : {"a", "b", "k", "l", "f", "g"}) {
      if (!cur.contains(key)) continue;
      for (const Json& c : candidates(cur.at(key))) {
        Json trial = cur;
        trial[key] = c;
        if (fails(trial)) {
          cur = trial;
          progress = true;
          break;
        }
      }
      if (progress) break;
    }
    if (!progress) break;
  }
  return cur;
}

Suite suite_from_json(const Json& j) {
  try {
    Suite s;
    s.name = j.value("name", "custom");
    for (const auto& e : j.at("checks")) {
      SuiteEntry en;
      en.check = e.at("check").get<std::string>();
      find_check(en.check);
      en.count = e.value("count", std::size_t(1));
      en.seed = e.value("seed", std::uint64_t(0));
      if (e.contains("params")) en.params = e.at("params");
      s.entries.push_back(std::move(en));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("suite manifest: ") + e.what());
  }
}

Json to_json(const Suite& s) {
  Json checks = Json::array();
  for (const auto& e : s.entries)
    checks.push_back(Json{{"check", e.check}, {"count", e.count}, {"seed", e.seed}, {"params", e.params}});
  return Json{{"name", s.name}, {"checks", checks}};
}

Suite builtin_suite(const std::string& name) {
  Json j;
  if (name == "default") {
    j = Json::parse(R"({"name": "default", "checks": [
      {"check": "mean_identity", "count": 200, "seed": 1, "params": {"interior": 10}},
      {"check": "holder", "count": 500, "seed": 2},
      {"check": "lemma_1d", "count": 200, "seed": 3},
      {"check": "compression", "count": 40, "seed": 4},
      {"check": "bm_curvilinear", "count": 40, "seed": 5, "params": {"n": 1}},
      {"check": "bm_curvilinear", "count": 10, "seed": 6, "params": {"n": 2, "cells": 8}},
      {"check": "refinement", "count": 20, "seed": 7, "params": {"p": 1}},
      {"check": "normalized_bm", "count": 20, "seed": 8, "params": {"p": 1}},
      {"check": "sectional", "count": 20, "seed": 9, "params": {"beta_min": 0}},
      {"check": "bbl", "count": 40, "seed": 10},
      {"check": "marginal_bbl", "count": 20, "seed": 11, "params": {"beta_min": 0}},
      {"check": "measure_bm", "count": 20, "seed": 12},
      {"check": "minkowski_first", "count": 10, "seed": 13, "params": {"shape": "box"}},
      {"check": "isoperimetric", "count": 5, "seed": 14},
      {"check": "mixed_volume", "count": 10, "seed": 15},
      {"check": "minkowski_first_funcs", "count": 5, "seed": 16, "params": {"shape": "box"}},
      {"check": "power_monotonicity", "count": 30, "seed": 17}
    ]})");
  } else if (name == "smoke") {
    j = Json::parse(R"({"name": "smoke", "checks": [
      {"check": "mean_identity", "count": 10, "seed": 1, "params": {"interior": 10}},
      {"check": "holder", "count": 20, "seed": 2},
      {"check": "lemma_1d", "count": 10, "seed": 3},
      {"check": "compression", "count": 3, "seed": 4},
      {"check": "bm_curvilinear", "count": 4, "seed": 5, "params": {"n": 1}},
      {"check": "bbl", "count": 3, "seed": 10},
      {"check": "power_monotonicity", "count": 3, "seed": 17}
    ]})");
  } else {
    throw InputError("unknown suite: " + name);
  }
  return suite_from_json(j);
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CURVILIN_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SuiteResult run_suite(const Suite& suite, const SuiteOptions& opt) {
  struct Job {
    const SuiteEntry* entry;
    Json params;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (const auto& e : suite.entries) {
    Json params = e.params;
    if (opt.p) params["p"] = *opt.p;
    if (opt.cells) params["cells"] = *opt.cells;
    for (std::size_t i = 0; i < e.count; ++i) jobs.push_back({&e, params, i});
  }
  SuiteResult res;
  res.reports.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      const Job& job = jobs[j];
      res.reports[j] = run_instance(find_check(job.entry->check), job.params, opt.seed ^ job.entry->seed, job.index,
                                    opt.attempt);
    }
  };
  int w = std::min<int>(resolve_workers(opt.workers), int(std::max<std::size_t>(1, jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < w; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return res;
}

std::string SuiteResult::jsonl() const {
  std::string out;
  for (const auto& r : reports) out += to_json(r).dump() + "\n";
  return out;
}

std::string SuiteResult::summary_csv() const {
  struct Row {
    std::size_t runs = 0, passes = 0, refines = 0;
    double min_slack = kInf;
  };
  std::vector<std::pair<std::string, Row>> rows;
  for (const auto& r : reports) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& x) { return x.first == r.check; });
    if (it == rows.end()) {
      rows.emplace_back(r.check, Row{});
      it = rows.end() - 1;
    }
    Row& row = it->second;
    ++row.runs;
    row.passes += r.verdict == Verdict::pass;
    row.refines += r.verdict == Verdict::refine;
    row.min_slack = std::min(row.min_slack, r.slack);
  }
  std::ostringstream os;
  os.precision(17);
  os << "check_id,runs,passes,refines,min_slack\n";
  for (const auto& [id, row] : rows)
    os << id << ',' << row.runs << ',' << row.passes << ',' << row.refines << ','
       << row.min_slack << '\n';
  return os.str();
}

bool SuiteResult::any_fail() const {
  return std::any_of(reports.begin(), reports.end(), [](const Report& r) { return r.verdict == Verdict::fail; });
}

}  // namespace curvilin
