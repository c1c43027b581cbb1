#include <doctest.h>

#include <cmath>

#include "curvilin/io.hpp"
#include "curvilin/verify.hpp"

using namespace curvilin;
using doctest::Approx;

namespace {

SumSpec spec_of(double p, double t, std::vector<double> alphas) {
  SumSpec s;
  s.p = p;
  s.t = t;
  s.alphas = PowerVector(std::move(alphas));
  return s;
}

StaircaseSet cube(std::size_t n, std::size_t cells, double side, double height) {
  Grid g = Grid::uniform(n, side / double(cells), cells);
  return {g, std::vector<double>(g.cells(), height)};
}

}  // namespace

TEST_CASE("verdicts") {
  Report r;
  r.lhs = 1.0;
  r.rhs = 1.0 + 1e-10;
  r.tol = kExactTol;
  settle(r);
  CHECK(r.verdict == Verdict::pass);
  r.rhs = 1.1;
  settle(r);
  CHECK(r.verdict == Verdict::fail);
  r.lhs = kInf;
  settle(r);
  CHECK(r.verdict == Verdict::pass);
  r.rhs = kInf;
  settle(r);
  CHECK(r.verdict == Verdict::fail);
  CHECK(verdict_from_string(to_string(Verdict::refine)) == Verdict::refine);
  CHECK(grid_tolerance(0.01, 5.0) == Approx(kGridTolC * 0.05));
}

TEST_CASE("refinement loop") {
  int calls = 0;
  Report r = run_refined(
      [&](const Attempt& at) {
        ++calls;
        Report x;
        x.lhs = at.lambda_points >= 259 ? 1.0 : 0.0;
        x.rhs = 1.0;
        settle(x);
        return x;
      },
      Attempt{}, 2);
  CHECK(calls == 3);
  CHECK(r.verdict == Verdict::pass);
  CHECK(r.refinements == 2);

  Report never = run_refined(
      [](const Attempt&) {
        Report x;
        x.lhs = 0;
        x.rhs = 1;
        settle(x);
        return x;
      },
      Attempt{}, 2);
  CHECK(never.verdict == Verdict::fail);
}

TEST_CASE("one-dimensional lemma examples") {
  IntervalUnion unit{{{0, 1}}};
  Report eq = check_lemma_1d(unit, unit, spec_of(2, 0.5, {0.7}));
  CHECK(std::abs(eq.slack) <= 1e-12);
  Report classical = check_lemma_1d(IntervalUnion{{{0, 2}}}, IntervalUnion{{{0, 4}}}, spec_of(1, 0.5, {1}));
  CHECK(classical.lhs == 3.0);
  CHECK(classical.rhs == 3.0);
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    Report r = check_lemma_1d(random_interval_union(rng, 3, 2.0), random_interval_union(rng, 3, 2.0),
                              spec_of(2, 0.5, {0.7}));
    CHECK(r.slack >= -1e-9);
  }
}

TEST_CASE("compression examples") {
  BoxUnion flat{2, {{{0, 0}, {1, 1}}}};
  Report same = check_compression_monotone(flat, flat, spec_of(2, 0.5, {1, 0.5}));
  CHECK(same.slack == Approx(0).scale(1));
  CHECK(same.params["volume_gap"].get<double>() == 0.0);
  BoxUnion stacked{2, {{{0, 0}, {1, 1}}, {{0, 2}, {0.5, 3}}}};
  Report pos = check_compression_monotone(stacked, flat, spec_of(1, 0.5, {1, 1}));
  CHECK(pos.slack > 0);
}

TEST_CASE("classical brunn-minkowski reductions pass") {
  Rng rng(23);
  for (int i = 0; i < 10; ++i) {
    StaircaseSet a = random_staircase(rng, 1, 16, 1.0 / 16, 1.0, 8, 0.8),
                 b = random_staircase(rng, 1, 16, 1.0 / 16, 1.0, 8, 0.8);
    CHECK(check_bm_curvilinear(a, b, spec_of(1, 0.5, {1, 1})).verdict == Verdict::pass);
    GridFunction f = from_staircase(a), g = from_staircase(b);
    CHECK(check_bbl(f, g, spec_of(1, 0.5, {1, 0.5})).verdict == Verdict::pass);
  }
}

// With p > 1 and beta < 0 the sectional bound asks for more than the sum of
// two unit cubes has.
TEST_CASE("unit cubes break the sectional bound for p > 1 and beta < 0") {
  StaircaseSet c = cube(2, 4, 1.0, 1.0);
  SumSpec s = spec_of(2, 0.5, {1, 1, 1});
  Report neg = check_sectional(c, c, s, -0.2, 1);
  CHECK(neg.params["delta"].get<double>() < 0);
  CHECK(neg.verdict == Verdict::fail);
  CHECK(check_sectional(c, c, spec_of(1, 0.5, {1, 1, 1}), -0.2, 1).verdict == Verdict::pass);
  CHECK(check_sectional(c, c, s, 0.5, 1).verdict == Verdict::pass);
}

// S(A, A) is the dilation derivative for boxes but not for general down-sets.
TEST_CASE("minkowski first: boxes pass, a down-set pair does not") {
  StaircaseSet a = cube(1, 8, 1.0, 1.0), b = cube(1, 8, 1.0, 2.0);
  CHECK(check_minkowski_first(a, b, 2.0, PowerVector({1, 1})).verdict == Verdict::pass);
  int fails = 0;
  for (std::size_t i = 0; i < 20; ++i) fails += run_instance(find_check("minkowski_first"), Json::object(), 110, i,
                                                             Attempt{}).verdict == Verdict::fail;
  CHECK(fails > 0);
}

TEST_CASE("power monotonicity at p = 1") {
  Rng rng(31);
  StaircaseSet a = random_down_set(rng, 1, 8, 0.125, 1.0), b = random_down_set(rng, 1, 8, 0.125, 1.0);
  Report r = check_power_monotonicity(a, b, spec_of(1, 0.5, {0.5, 0.5}), spec_of(1, 0.5, {1, 1}));
  CHECK(r.verdict == Verdict::pass);
}

TEST_CASE("registry generators are deterministic") {
  for (const CheckDef& def : check_registry()) {
    INFO(def.id);
    Rng r1(instance_seed(5, def.id, 3)), r2(instance_seed(5, def.id, 3));
    CHECK(def.generate(r1, Json::object()).dump() == def.generate(r2, Json::object()).dump());
  }
  CHECK(instance_seed(1, "bbl", 0) != instance_seed(1, "bbl", 1));
  CHECK(instance_seed(1, "bbl", 0) != instance_seed(1, "holder", 0));
  CHECK_THROWS(find_check("nope"));
}

TEST_CASE("suite runs are reproducible across worker counts") {
  Suite s = builtin_suite("smoke");
  SuiteOptions one, many;
  one.workers = 1;
  many.workers = 4;
  SuiteResult a = run_suite(s, one), b = run_suite(s, many);
  CHECK(a.jsonl() == b.jsonl());
  CHECK(a.summary_csv() == b.summary_csv());
  CHECK(a.summary_csv().rfind("check_id,runs,passes,refines,min_slack\n", 0) == 0);
  CHECK(to_json(suite_from_json(to_json(s))).dump() == to_json(s).dump());
}

TEST_CASE("shrink reduces an injected failure") {
  // Shrinking the sum volume tenfold makes every nonempty instance fail.
  auto buggy = [](const Json& i) {
    SumSpec s = spec_of(i.at("p"), i.at("t"), {1, i.at("alphas")[1].get<double>()});
    Report r = check_compression_monotone(box_union_from_json(i.at("a")), box_union_from_json(i.at("b")), s);
    r.lhs *= 0.1;
    settle(r);
    return r;
  };
  Json inst;
  for (std::size_t i = 0; inst.is_null() || inst["a"]["boxes"].size() + inst["b"]["boxes"].size() < 5; ++i) {
    Rng rng(instance_seed(8, "compression", i));
    inst = find_check("compression").generate(rng, {{"max_boxes", 4}});
  }
  REQUIRE(buggy(inst).verdict == Verdict::fail);
  Json small = shrink(buggy, inst);
  CHECK(buggy(small).verdict == Verdict::fail);
  CHECK(small["a"]["boxes"].size() + small["b"]["boxes"].size() <= 2);

  auto honest = [](const Json& i) {
    SumSpec s = spec_of(i.at("p"), i.at("t"), {1, i.at("alphas")[1].get<double>()});
    return check_compression_monotone(box_union_from_json(i.at("a")), box_union_from_json(i.at("b")), s);
  };
  CHECK(shrink(honest, inst) == inst);
  CHECK(shrink(honest, Json::object()) == Json::object());
}
