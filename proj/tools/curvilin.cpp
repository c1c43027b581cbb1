#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "curvilin/error.hpp"
#include "curvilin/io.hpp"
#include "curvilin/verify.hpp"

using namespace curvilin;

namespace {

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    write_text_file(c.out, text);
}

std::string cells_csv(const Grid& g, const std::vector<double>& values, const char* value_name) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < g.dims(); ++i) os << 'x' << i << ',';
  os << value_name << '\n';
  for (std::size_t c = 0; c < g.cells(); ++c) {
    auto idx = g.unflatten(c);
    for (std::size_t i = 0; i < g.dims(); ++i) os << 0.5 * (g.lower(i, idx[i]) + g.upper(i, idx[i])) << ',';
    os << values[c] << '\n';
  }
  return os.str();
}

Suite load_suite(const std::string& name) {
  if (name == "default" || name == "smoke") return builtin_suite(name);
  return suite_from_json(read_json_file(name));
}

int run_verify(const RunConfig& c) {
  SuiteOptions opt;
  opt.seed = c.seed;
  opt.workers = c.workers;
  if (c.lambda_points) opt.attempt.lambda_points = *c.lambda_points;
  if (c.grid) opt.cells = *c.grid;
  if (c.override_p) opt.p = c.spec.p;
  SuiteResult res = run_suite(load_suite(c.suite), opt);
  if (!c.out.empty()) write_text_file(c.out, res.jsonl());
  std::cout << res.summary_csv();
  return res.any_fail() ? 1 : 0;
}

SumSpec spec_for(const RunConfig& c, std::size_t base_dims) {
  SumSpec s = c.spec;
  if (s.alphas.size() == 0) s.alphas = PowerVector(std::vector<double>(base_dims + 1, 1.0));
  if (c.lambda_points) s.lambda_points = *c.lambda_points;
  if (c.grid) s.refine = *c.grid;
  return s;
}

int run_sum(const RunConfig& c) {
  Json ja = read_json_file(c.a), jb = read_json_file(c.b);
  if (ja.contains("intervals")) {
    IntervalUnion k = interval_union_from_json(ja), l = interval_union_from_json(jb);
    SumSpec s = spec_for(c, 0);
    inject_volume_lambda(s, volume(k), volume(l));
    IntervalUnion u = curvilinear_sum_1d(k, l, s);
    Json out = to_json(u);
    out["length"] = u.length();
    emit(c, out.dump(2) + "\n");
    return 0;
  }
  StaircaseSet a = staircase_from_json(ja), b = staircase_from_json(jb);
  SumSpec s = spec_for(c, a.base_dims());
  if (s.mode == SumMode::curvilinear) inject_volume_lambda(s, a.volume(), b.volume());
  SumResult r = s.mode == SumMode::curvilinear ? curvilinear_sum_grid(a, b, s) : quasi_sum_grid(a, b, s);
  if (c.format == "csv") {
    emit(c, cells_csv(r.set.grid, r.set.heights, "height"));
  } else {
    Json out = to_json(r.set);
    out["volume"] = r.volume;
    emit(c, out.dump(2) + "\n");
  }
  return 0;
}

int run_conv(const RunConfig& c) {
  GridFunction f = grid_function_from_json(read_json_file(c.a)), g = grid_function_from_json(read_json_file(c.b));
  SumSpec s = spec_for(c, f.grid.dims());
  inject_volume_lambda(s, f.integral(), g.integral());
  Convolution h = sup_convolve(f, g, s);
  if (c.format == "csv") {
    emit(c, cells_csv(h.h.grid, h.h.values, "value"));
  } else {
    Json out = to_json(h.h);
    out["integral"] = h.integral;
    emit(c, out.dump(2) + "\n");
  }
  return 0;
}

int run_compress(const RunConfig& c) {
  StaircaseSet s = compress(box_union_from_json(read_json_file(c.a)));
  emit(c, c.format == "csv" ? cells_csv(s.grid, s.heights, "height") : to_json(s).dump(2) + "\n");
  return 0;
}

int run_surface(const RunConfig& c) {
  StaircaseSet a = staircase_from_json(read_json_file(c.a));
  StaircaseSet b = c.b.empty() ? a : staircase_from_json(read_json_file(c.b));
  SumSpec s = spec_for(c, a.base_dims());
  SurfaceOptions opt;
  opt.lambda_points = s.lambda_points;
  opt.refine = s.refine;
  SurfaceEstimate e = surface_area_sets(a, b, lebesgue_measure(a.grid), s.p, s.alphas, opt);
  if (c.format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "eps,quotient\n";
    for (auto [eps, q] : e.quotients) os << eps << ',' << q << '\n';
    emit(c, os.str());
    return 0;
  }
  Json q = Json::array();
  for (auto [eps, v] : e.quotients) q.push_back({eps, v});
  Json out{{"quotients", q},
           {"estimate", e.estimate},
           {"trend", e.trend == Trend::monotone ? "monotone" : "oscillating"},
           {"within_band", e.within_band}};
  emit(c, out.dump(2) + "\n");
  return 0;
}

int run(const RunConfig& c) {
  if (c.command == "verify") return run_verify(c);
  if (c.command == "sum") return run_sum(c);
  if (c.command == "conv") return run_conv(c);
  if (c.command == "compress") return run_compress(c);
  if (c.command == "surface") return run_surface(c);
  throw InputError("unknown command: " + c.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvilinear sums, convolutions and inequality checks"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string alphas, mode = "curvilinear", form = "with_t", config;
  double p = 1, t = 0.5;
  bool dump_config = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--lambda-points", cfg.lambda_points, "uniform lambda grid size")->check(CLI::PositiveNumber);
    sub->add_option("--grid", cfg.grid, "verify: staircase cells per axis; others: output cells per input cell")
        ->check(CLI::PositiveNumber);
    sub->add_option("--p", p, "L_p exponent");
    sub->add_option("--t", t, "interpolation weight");
    sub->add_option("--alphas", alphas, "comma list of exponents, e.g. 1,0.5 or 1,-inf");
    sub->add_option("--mode", mode, "curvilinear, quasi or quasi_vertical");
    sub->add_option("--form", form, "with_t or t_free");
    sub->add_option("--config", config, "run configuration JSON (replaces flags)");
    sub->add_flag("--dump-config", dump_config, "print the resolved run configuration and exit");
  };

  CLI::App* verify = app.add_subcommand("verify", "run a check suite");
  verify->add_option("--suite", cfg.suite, "default, smoke, or a manifest path");
  verify->add_option("--seed", cfg.seed, "base seed");
  verify->add_option("--workers", cfg.workers, "worker threads (0: CURVILIN_WORKERS or all cores)");
  common(verify);
  for (const char* name : {"sum", "conv", "compress", "surface"}) {
    CLI::App* sub = app.add_subcommand(name, std::string(name) + " on input files");
    sub->add_option("--a", cfg.a, "first input")->required();
    if (std::string(name) != "compress") sub->add_option("--b", cfg.b, "second input");
    common(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!config.empty()) {
      cfg = run_config_from_json(read_json_file(config));
    } else {
      Json spec{{"p", p}, {"t", t}, {"mode", mode}, {"coefficient_form", form}, {"alphas", Json::array()}};
      if (!alphas.empty())
        for (double a : parse_real_list(alphas)) spec["alphas"].push_back(real_to_json(a));
      if (cfg.lambda_points) spec["lambda_points"] = *cfg.lambda_points;
      cfg.spec = sum_spec_from_json(spec);
      cfg.override_p = app.get_subcommands().front()->count("--p") > 0;
      if ((cfg.command == "sum" || cfg.command == "conv") && cfg.b.empty()) throw InputError("--b is required");
    }
    if (dump_config) {
      std::cout << to_json(cfg).dump(2) << "\n";
      return 0;
    }
    return run(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
