#include <doctest.h>

#include "curvilin/error.hpp"
#include "curvilin/io.hpp"
#include "curvilin/verify.hpp"

using namespace curvilin;

namespace {

template <class T, class F>
T round_trip(const T& x, F from) {
  return from(Json::parse(to_json(x).dump()));
}

}  // namespace

TEST_CASE("extended reals") {
  CHECK(real_from_json(real_to_json(kInf)) == kInf);
  CHECK(real_from_json(real_to_json(-kInf)) == -kInf);
  CHECK(real_from_json(Json(0.1)) == 0.1);
  CHECK_THROWS_AS(real_from_json(Json("nan")), InputError);
  CHECK(parse_real_list("1,-0.5,inf") == std::vector<double>{1, -0.5, kInf});
  CHECK_THROWS_AS(parse_real_list("1,x"), InputError);
  CHECK_THROWS_AS(parse_real_list(""), InputError);
}

TEST_CASE("set formats round trip") {
  Rng rng(3);
  IntervalUnion u = random_interval_union(rng, 3, 2.0);
  CHECK(round_trip(u, interval_union_from_json).intervals == u.intervals);
  BoxUnion b = random_box_union(rng, 3, 4, 2.0);
  BoxUnion b2 = round_trip(b, box_union_from_json);
  REQUIRE(b2.boxes.size() == b.boxes.size());
  CHECK(b2.dim == 3);
  CHECK(b2.boxes[0].hi == b.boxes[0].hi);
  StaircaseSet s = random_staircase(rng, 2, 4, 0.25, 1.0, 0, 1.0);
  StaircaseSet s2 = round_trip(s, staircase_from_json);
  CHECK(s2.grid == s.grid);
  CHECK(s2.heights == s.heights);
  GridFunction f = from_staircase(s);
  CHECK(round_trip(f, grid_function_from_json).values == f.values);
  CHECK(to_json(f).contains("values"));
}

TEST_CASE("spec and report round trip") {
  SumSpec s;
  s.p = 2.5;
  s.t = 0.3;
  s.alphas = PowerVector({0.5, kInf, -0.25});
  s.mode = SumMode::quasi;
  s.form = CoefficientForm::t_free;
  s.lambda_points = 17;
  SumSpec s2 = round_trip(s, sum_spec_from_json);
  CHECK(s2.p == 2.5);
  CHECK(s2.alphas.alphas == s.alphas.alphas);
  CHECK(s2.mode == SumMode::quasi);
  CHECK(s2.form == CoefficientForm::t_free);
  CHECK(s2.lambda_points == 17);

  Report r;
  r.check = "bbl";
  r.seed = 99;
  r.lhs = 1.5;
  r.rhs = 1.25;
  r.tol = 1e-3;
  r.grid = 0.125;
  r.lambda_points = 64;
  r.params["p"] = 2;
  settle(r);
  Report r2 = round_trip(r, report_from_json);
  CHECK(to_json(r2).dump() == to_json(r).dump());
  CHECK(r2.verdict == Verdict::pass);
}

TEST_CASE("run config round trip") {
  RunConfig c;
  c.command = "sum";
  c.a = "a.json";
  c.b = "b.json";
  c.grid = 32;
  c.lambda_points = 128;
  c.spec.p = 3;
  c.spec.alphas = PowerVector({1, 0.5});
  c.override_p = true;
  c.format = "csv";
  CHECK(round_trip(c, run_config_from_json) == c);
  CHECK_FALSE(round_trip(RunConfig{}, run_config_from_json) == c);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(staircase_from_json(Json::parse(R"({"origin": [0]})")), InputError);
  CHECK_THROWS_AS(sum_spec_from_json(Json::parse(R"({"p": 2, "t": 0.5, "alphas": [1], "mode": "bogus"})")),
                  InputError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), InputError);
}
