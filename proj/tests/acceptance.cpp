// Prints one PASS/FAIL line per acceptance criterion. Exit status is 0 unless
// --strict is given and some criterion fails, or a criterion throws.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>

#include "curvilin/error.hpp"
#include "curvilin/verify.hpp"

using namespace curvilin;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Json generate(const std::string& check, const Json& params, std::uint64_t seed, std::size_t index) {
  Rng rng(instance_seed(seed, check, index));
  return find_check(check).generate(rng, params);
}

Outcome mean_identities() {
  auto start = Clock::now();
  const CheckDef& def = find_check("mean_identity");
  int fails = 0, lambda_misses = 0;
  double worst = 0;
  for (std::size_t i = 0; i < 10000; ++i) {
    Report r = def.run(generate("mean_identity", Json::object(), 101, i), Attempt{});
    if (r.verdict == Verdict::fail) ++fails;
    if (r.params.contains("lambda_ok") && !r.params["lambda_ok"].get<bool>()) ++lambda_misses;
    worst = std::max(worst, std::abs(r.slack) / std::abs(r.rhs));
  }
  double secs = seconds_since(start);
  return {fails == 0 && secs < 10,
          fmt("10000 draws, %d beyond 1e-6 relative, %d lambda* misses, worst rel %.3g, %.1f s", fails, lambda_misses,
              worst, secs)};
}

Outcome holder() {
  auto start = Clock::now();
  const CheckDef& def = find_check("holder");
  int fails = 0, mixed = 0;
  for (std::size_t i = 0; i < 100000; ++i) {
    Report r = def.run(generate("holder", Json::object(), 102, i), Attempt{});
    fails += r.verdict == Verdict::fail;
    mixed += r.params["branch"] == "mixed_sign";
  }
  double secs = seconds_since(start);
  return {fails == 0 && secs < 10,
          fmt("100000 tuples (%d mixed-sign), %d violations, %.1f s", mixed, fails, secs)};
}

Outcome lemma_1d() {
  auto start = Clock::now();
  const CheckDef& def = find_check("lemma_1d");
  int fails = 0;
  double min_slack = kInf;
  for (std::size_t i = 0; i < 500; ++i) {
    Report r = def.run(generate("lemma_1d", Json::object(), 103, i), Attempt{});
    fails += r.slack < -1e-9;
    min_slack = std::min(min_slack, r.slack);
  }
  double secs = seconds_since(start);
  return {fails == 0 && secs < 30, fmt("500 pairs, %d below -1e-9, min slack %.3g, %.1f s", fails, min_slack, secs)};
}

struct GateCount {
  int first = 0, final_pass = 0, total = 0;
};

GateCount gate(const std::string& check, const Json& params, std::uint64_t seed, int count) {
  const CheckDef& def = find_check(check);
  GateCount g;
  for (int i = 0; i < count; ++i) {
    Json inst = generate(check, params, seed, std::size_t(i));
    auto run = [&](const Attempt& at) { return def.run(inst, at); };
    Report r = run_refined(run, Attempt{}, 2);
    g.first += r.verdict == Verdict::pass && r.refinements == 0;
    g.final_pass += r.verdict == Verdict::pass;
    ++g.total;
  }
  return g;
}

Outcome bm_curvilinear() {
  auto start = Clock::now();
  GateCount main = gate("bm_curvilinear", {{"n", 1}, {"cells", 128}, {"branch", "main"}}, 104, 200);
  GateCount minb = gate("bm_curvilinear", {{"n", 1}, {"cells", 128}, {"branch", "min"}}, 105, 50);
  double secs = seconds_since(start);
  auto ok = [](const GateCount& g) { return g.first >= 0.99 * g.total && g.final_pass == g.total; };
  return {ok(main) && ok(minb) && secs < 300,
          fmt("main %d/%d first, %d/%d final; min branch %d/%d first, %d/%d final; %.1f s", main.first, main.total,
              main.final_pass, main.total, minb.first, minb.total, minb.final_pass, minb.total, secs)};
}

Outcome compression() {
  const CheckDef& def = find_check("compression");
  int gap_fails = 0, slack_fails = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    Report r = def.run(generate("compression", Json::object(), 106, i), Attempt{});
    gap_fails += r.params["volume_gap"].get<double>() > 1e-12;
    slack_fails += r.slack < -r.tol;
  }
  int oracle_fails = 0;
  double worst = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    Json inst = generate("compression", {{"range", 1.0}, {"max_boxes", 3}}, 107, i);
    StaircaseSet a = compress(box_union_from_json(inst["a"])), b = compress(box_union_from_json(inst["b"]));
    SumSpec s;
    s.p = inst["p"];
    s.t = inst["t"];
    s.alphas = PowerVector({1.0, inst["alphas"][1].get<double>()});
    inject_volume_lambda(s, a.volume(), b.volume());
    double fast = curvilinear_sum_grid(a, b, s).volume, oracle = sum_oracle(a, b, s, 0).volume;
    worst = std::max(worst, std::abs(fast - oracle));
    oracle_fails += std::abs(fast - oracle) > 1e-12;
  }
  return {gap_fails == 0 && slack_fails == 0 && oracle_fails == 0,
          fmt("200 unions: %d volume gaps > 1e-12, %d slack fails; 20 tiny oracle matches, worst |diff| %.3g", gap_fails,
              slack_fails, worst)};
}

Outcome bbl() {
  // Indicator equality case.
  int eq_fails = 0;
  Grid g = Grid::uniform(1, 1.0 / 16, 16);
  GridFunction one{g, std::vector<double>(16, 1.0)};
  for (double p : {1.0, 1.5, 2.0, 3.0})
    for (double t : {0.25, 0.5, 0.8})
      for (double a : {0.25, 0.5, 1.0}) {
        SumSpec s;
        s.p = p;
        s.t = t;
        s.alphas = PowerVector({1.0, a});
        inject_volume_lambda(s, 1.0, 1.0);
        double integral = sup_convolve(one, one, s).integral;
        eq_fails += std::abs(integral - 1.0) > 1e-9 || std::abs(mean_alpha(1, 1, t, p * s.alphas.gamma()) - 1) > 1e-12;
      }
  GateCount random = gate("bbl", {{"branch", "main"}}, 108, 200);
  // Hypograph bridge on matched grids.
  int bridge_fails = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    Json inst = generate("bbl", Json::object(), 109, i);
    GridFunction f = grid_function_from_json(inst["f"]), h = grid_function_from_json(inst["g"]);
    SumSpec s;
    s.p = inst["p"];
    s.t = inst["t"];
    s.alphas = PowerVector({1.0, real_from_json(inst["alphas"][1])});
    double conv = sup_convolve(f, h, s).integral, sets = curvilinear_sum_grid(hypograph(f), hypograph(h), s).volume;
    bridge_fails += conv != sets;
  }
  bool ok = eq_fails == 0 && random.first >= 0.99 * random.total && random.final_pass == random.total &&
            bridge_fails == 0;
  return {ok, fmt("indicator equality %d fails of 36; random %d/%d first, %d/%d final; bridge %d mismatches of 50",
                  eq_fails, random.first, random.total, random.final_pass, random.total, bridge_fails)};
}

Outcome surface_closed_forms() {
  Grid g = Grid::uniform(1, 1.0 / 8, 8);
  StaircaseSet square{g, std::vector<double>(8, 1.0)};
  PowerVector ones({1.0, 1.0});
  std::string detail;
  bool ok = true;
  for (double p : {1.0, 2.0, 3.0}) {
    SurfaceEstimate e = surface_area_sets(square, square, lebesgue_measure(g), p, ones);
    double rel = std::abs(e.estimate - 2.0 / p) / (2.0 / p);
    ok = ok && rel <= 0.02;
    detail += fmt("p=%g S=%.5f (rel %.2g); ", p, e.estimate, rel);
  }
  double worst = 0;
  for (std::size_t n : {1u, 2u})
    for (double p : {1.0, 1.5, 2.0, 3.0})
      for (double eps : {0.1, 0.3, 0.5, 0.75, 2.0}) {
        Grid gc = Grid::uniform(n, 0.25, 4);
        StaircaseSet cube{gc, std::vector<double>(gc.cells(), 1.0)};
        PowerVector al(std::vector<double>(n + 1, 1.0));
        double v = scalar_dilate(cube, eps, p, al).volume();
        worst = std::max(worst, std::abs(v - std::pow(eps, double(n + 1) / p) * cube.volume()));
      }
  ok = ok && worst <= 1e-9;
  detail += fmt("dilation law worst |diff| %.3g", worst);
  return {ok, detail};
}

Outcome minkowski_first() {
  const CheckDef& def = find_check("minkowski_first");
  int fails = 0, monotone = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    Report r = def.run(generate("minkowski_first", Json::object(), 110, i), Attempt{});
    fails += r.verdict == Verdict::fail;
    monotone += r.params["trend_ab"] == "monotone" && r.params["trend_aa"] == "monotone";
  }
  const CheckDef& iso = find_check("isoperimetric");
  int iso_fails = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    Report r = iso.run(generate("isoperimetric", Json::object(), 111, i), Attempt{});
    iso_fails += std::abs(r.slack) > r.tol;
  }
  return {fails == 0 && monotone >= 95 && iso_fails == 0,
          fmt("100 down-set pairs: %d fails, %d monotone trends; isoperimetric A=B: %d outside band of 20", fails,
              monotone, iso_fails)};
}

Outcome sectional_suite() {
  struct Family {
    const char* check;
    Json params;
  };
  Family fams[] = {{"normalized_bm", {{"n", 2}, {"cells", 8}}},
                   {"sectional", {{"k", 1}}},
                   {"marginal_bbl", {{"k", 1}}},
                   {"measure_bm", {{"k", 1}}}};
  std::string detail;
  bool ok = true;
  std::uint64_t seed = 112;
  for (const auto& f : fams) {
    const CheckDef& def = find_check(f.check);
    int fails = 0, refines = 0, fails_p1 = 0;
    for (std::size_t i = 0; i < 50; ++i) {
      Report r = run_instance(def, f.params, seed, i, Attempt{});
      fails += r.verdict == Verdict::fail;
      refines += r.verdict == Verdict::refine;
      fails_p1 += r.verdict == Verdict::fail && r.params.value("p", 0.0) == 1.0;
    }
    ok = ok && fails == 0;
    detail += fmt("%s %d fail (%d at p=1), %d refine; ", f.check, fails, fails_p1, refines);
    ++seed;
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome determinism() {
  Suite smoke = builtin_suite("smoke");
  SuiteOptions a, b;
  a.seed = b.seed = 42;
  a.workers = 1;
  b.workers = 3;
  bool same = run_suite(smoke, a).jsonl() == run_suite(smoke, b).jsonl();
  Suite p1 = suite_from_json(Json::parse(R"({"name": "p1", "checks": [
    {"check": "lemma_1d", "count": 30, "seed": 3},
    {"check": "compression", "count": 10, "seed": 4},
    {"check": "bm_curvilinear", "count": 20, "seed": 5, "params": {"n": 1}},
    {"check": "bbl", "count": 20, "seed": 10},
    {"check": "power_monotonicity", "count": 10, "seed": 17, "params": {"mode": "curvilinear"}}]})"));
  SuiteOptions dense, single;
  dense.p = single.p = 1.0;
  dense.attempt.lambda_points = 64;
  single.attempt.lambda_points = 1;
  SuiteResult rd = run_suite(p1, dense), rs = run_suite(p1, single);
  int mismatches = 0, fails = 0;
  for (std::size_t i = 0; i < rd.reports.size(); ++i) {
    const Report &x = rd.reports[i], &y = rs.reports[i];
    mismatches += x.lhs != y.lhs || x.rhs != y.rhs || x.verdict != y.verdict;
    fails += x.verdict != Verdict::pass;
  }
  return {same && mismatches == 0 && fails == 0,
          fmt("rerun byte-identical: %s; p=1 with 64 vs 1 lambda points: %d mismatches, %d non-pass of %zu", same ? "yes" : "no",
              mismatches, fails, rd.reports.size())};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"mean identities", mean_identities},
      {"holder product inequality", holder},
      {"one-dimensional lemma, exact path", lemma_1d},
      {"curvilinear Brunn-Minkowski", bm_curvilinear},
      {"compression", compression},
      {"Borell-Brascamp-Lieb", bbl},
      {"surface area closed forms", surface_closed_forms},
      {"Minkowski first inequality", minkowski_first},
      {"normalized and sectional inequalities", sectional_suite},
      {"determinism and p=1 reductions", determinism},
  };
  int failed = 0, errors = 0, index = 0;
  for (auto& [name, fn] : criteria) {
    ++index;
    try {
      Outcome o = fn();
      failed += !o.pass;
      std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    } catch (const std::exception& e) {
      ++errors;
      std::printf("FAIL %d %s: error: %s\n", index, name, e.what());
    }
    std::fflush(stdout);
  }
  return errors > 0 || (strict && failed > 0) ? 1 : 0;
}
