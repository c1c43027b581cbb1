#include "curvilin/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "curvilin/error.hpp"

namespace curvilin {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  }
}

std::vector<double> real_list(const Json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(real_from_json(v));
  return out;
}

Json real_list_json(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(real_to_json(x));
  return a;
}

const char* mode_name(SumMode m) {
  switch (m) {
    case SumMode::curvilinear: return "curvilinear";
    case SumMode::quasi: return "quasi";
    case SumMode::quasi_vertical: return "quasi_vertical";
  }
  return "";
}

SumMode mode_from(const std::string& s) {
  if (s == "curvilinear") return SumMode::curvilinear;
  if (s == "quasi") return SumMode::quasi;
  if (s == "quasi_vertical") return SumMode::quasi_vertical;
  throw InputError("unknown mode: " + s);
}

CoefficientForm form_from(const std::string& s) {
  if (s == "with_t") return CoefficientForm::with_t;
  if (s == "t_free") return CoefficientForm::t_free;
  throw InputError("unknown coefficient_form: " + s);
}

Grid grid_from(const Json& j) {
  std::vector<double> origin = j.at("origin").get<std::vector<double>>();
  std::vector<std::size_t> shape = j.at("shape").get<std::vector<std::size_t>>();
  std::vector<double> spacing;
  const Json& h = j.at("spacing");
  if (h.is_array()) spacing = h.get<std::vector<double>>();
  else spacing.assign(shape.size(), h.get<double>());
  return Grid(origin, spacing, shape);
}

void grid_into(Json& j, const Grid& g) {
  j["origin"] = g.origin;
  bool uniform = std::all_of(g.spacing.begin(), g.spacing.end(), [&](double h) { return h == g.spacing[0]; });
  if (uniform && !g.spacing.empty()) j["spacing"] = g.spacing[0];
  else j["spacing"] = g.spacing;
  j["shape"] = g.shape;
}

}  // namespace

Json real_to_json(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  return x;
}

double real_from_json(const Json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    throw InputError("not a real: " + s);
  }
  if (!j.is_number()) throw InputError("expected a number");
  return j.get<double>();
}

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf" || item == "+inf") out.push_back(kInf);
    else if (item == "-inf") out.push_back(-kInf);
    else {
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(item, &pos);
      } catch (const std::exception&) {
        throw InputError("not a real: " + item);
      }
      if (pos != item.size()) throw InputError("not a real: " + item);
      out.push_back(v);
    }
  }
  if (out.empty()) throw InputError("empty list");
  return out;
}

Json to_json(const IntervalUnion& u) {
  Json a = Json::array();
  for (auto [lo, hi] : u.intervals) a.push_back({lo, hi});
  return Json{{"intervals", a}};
}

IntervalUnion interval_union_from_json(const Json& j) {
  return guarded("interval union", [&] {
    IntervalUnion u;
    for (const auto& iv : j.at("intervals")) {
      double lo = iv.at(0).get<double>(), hi = iv.at(1).get<double>();
      if (!(lo >= 0 && hi > lo)) throw InputError("intervals need 0 <= lo < hi");
      u.intervals.emplace_back(lo, hi);
    }
    return u;
  });
}

Json to_json(const BoxUnion& a) {
  Json boxes = Json::array();
  for (const auto& b : a.boxes) boxes.push_back(Json{{"lo", b.lo}, {"hi", b.hi}});
  return Json{{"dim", a.dim}, {"boxes", boxes}};
}

BoxUnion box_union_from_json(const Json& j) {
  return guarded("box union", [&] {
    BoxUnion a;
    a.dim = j.at("dim").get<int>();
    if (a.dim < 2 || a.dim > 3) throw InputError("dim must be 2 or 3");
    for (const auto& b : j.at("boxes")) {
      Box bx{b.at("lo").get<std::vector<double>>(), b.at("hi").get<std::vector<double>>()};
      if (bx.lo.size() != std::size_t(a.dim) || bx.hi.size() != std::size_t(a.dim))
        throw InputError("box corner has the wrong dimension");
      for (int i = 0; i < a.dim; ++i)
        if (!(bx.lo[i] >= 0 && bx.hi[i] > bx.lo[i])) throw InputError("boxes need 0 <= lo < hi");
      a.boxes.push_back(std::move(bx));
    }
    return a;
  });
}

Json to_json(const StaircaseSet& s) {
  Json j;
  grid_into(j, s.grid);
  j["heights"] = s.heights;
  j["volume"] = s.volume();
  return j;
}

StaircaseSet staircase_from_json(const Json& j) {
  return guarded("staircase", [&] {
    StaircaseSet s{grid_from(j), j.at("heights").get<std::vector<double>>()};
    if (s.heights.size() != s.grid.cells()) throw InputError("heights do not match the grid shape");
    for (double h : s.heights)
      if (!(h >= 0)) throw InputError("heights must be nonnegative");
    return s;
  });
}

Json to_json(const GridFunction& f) {
  Json j;
  grid_into(j, f.grid);
  j["values"] = f.values;
  j["integral"] = f.integral();
  return j;
}

GridFunction grid_function_from_json(const Json& j) {
  return guarded("grid function", [&] {
    GridFunction f{grid_from(j), j.at("values").get<std::vector<double>>()};
    if (f.values.size() != f.grid.cells()) throw InputError("values do not match the grid shape");
    for (double v : f.values)
      if (!(v >= 0)) throw InputError("values must be nonnegative");
    return f;
  });
}

Json to_json(const SumSpec& s) {
  Json j;
  j["p"] = s.p;
  j["t"] = s.t;
  j["alphas"] = real_list_json(s.alphas.alphas);
  j["lambda_points"] = s.lambda_points;
  j["mode"] = mode_name(s.mode);
  j["coefficient_form"] = s.form == CoefficientForm::t_free ? "t_free" : "with_t";
  j["extra_lambdas"] = s.extra_lambdas;
  j["pair_lambdas"] = s.pair_lambdas;
  j["corner_lambdas"] = s.corner_lambdas;
  j["refine"] = s.refine;
  return j;
}

SumSpec sum_spec_from_json(const Json& j) {
  return guarded("sum spec", [&] {
    SumSpec s;
    s.p = j.at("p").get<double>();
    if (j.contains("t")) s.t = j.at("t").get<double>();
    s.alphas = PowerVector(real_list(j.at("alphas")));
    if (j.contains("lambda_points")) s.lambda_points = j.at("lambda_points").get<int>();
    if (j.contains("mode")) s.mode = mode_from(j.at("mode").get<std::string>());
    if (j.contains("coefficient_form")) s.form = form_from(j.at("coefficient_form").get<std::string>());
    if (j.contains("extra_lambdas")) s.extra_lambdas = j.at("extra_lambdas").get<std::vector<double>>();
    if (j.contains("pair_lambdas")) s.pair_lambdas = j.at("pair_lambdas").get<bool>();
    if (j.contains("corner_lambdas")) s.corner_lambdas = j.at("corner_lambdas").get<bool>();
    if (j.contains("refine")) s.refine = j.at("refine").get<int>();
    return s;
  });
}

Json to_json(const Report& r) {
  Json j;
  j["check"] = r.check;
  j["seed"] = r.seed;
  j["params"] = r.params;
  j["lhs"] = real_to_json(r.lhs);
  j["rhs"] = real_to_json(r.rhs);
  j["slack"] = real_to_json(r.slack);
  j["tol"] = r.tol;
  j["grid"] = r.grid;
  j["lambda_points"] = r.lambda_points;
  j["refinements"] = r.refinements;
  j["verdict"] = to_string(r.verdict);
  return j;
}

Report report_from_json(const Json& j) {
  return guarded("report", [&] {
    Report r;
    r.check = j.at("check").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.params = j.at("params");
    r.lhs = real_from_json(j.at("lhs"));
    r.rhs = real_from_json(j.at("rhs"));
    r.slack = real_from_json(j.at("slack"));
    r.tol = j.at("tol").get<double>();
    r.grid = j.at("grid").get<double>();
    r.lambda_points = j.at("lambda_points").get<int>();
    r.refinements = j.at("refinements").get<int>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    return r;
  });
}

bool RunConfig::operator==(const RunConfig& o) const { return to_json(*this).dump() == to_json(o).dump(); }

Json to_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["a"] = c.a;
  j["b"] = c.b;
  j["out"] = c.out;
  j["suite"] = c.suite;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["grid"] = c.grid ? Json(*c.grid) : Json(nullptr);
  j["lambda_points"] = c.lambda_points ? Json(*c.lambda_points) : Json(nullptr);
  j["spec"] = to_json(c.spec);
  j["override_p"] = c.override_p;
  j["format"] = c.format;
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  return guarded("run config", [&] {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.a = j.value("a", "");
    c.b = j.value("b", "");
    c.out = j.value("out", "");
    c.suite = j.value("suite", "default");
    c.seed = j.value("seed", std::uint64_t{0});
    c.workers = j.value("workers", 0);
    if (j.contains("grid") && !j.at("grid").is_null()) c.grid = j.at("grid").get<int>();
    if (j.contains("lambda_points") && !j.at("lambda_points").is_null())
      c.lambda_points = j.at("lambda_points").get<int>();
    c.spec = sum_spec_from_json(j.at("spec"));
    c.override_p = j.value("override_p", false);
    c.format = j.value("format", "json");
    return c;
  });
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

}  // namespace curvilin
