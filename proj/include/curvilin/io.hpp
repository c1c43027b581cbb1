#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "curvilin/curvsum.hpp"
#include "curvilin/funcs.hpp"
#include "curvilin/report.hpp"
#include "curvilin/sets.hpp"

namespace curvilin {

using Json = nlohmann::ordered_json;

// Extended reals are written as the strings "inf" / "-inf".
Json real_to_json(double x);
double real_from_json(const Json& j);

Json to_json(const IntervalUnion& u);
Json to_json(const BoxUnion& a);
Json to_json(const StaircaseSet& s);
Json to_json(const GridFunction& f);
Json to_json(const SumSpec& s);
Json to_json(const Report& r);

// Parsers throw InputError on malformed documents.
IntervalUnion interval_union_from_json(const Json& j);
BoxUnion box_union_from_json(const Json& j);
StaircaseSet staircase_from_json(const Json& j);
GridFunction grid_function_from_json(const Json& j);
SumSpec sum_spec_from_json(const Json& j);
Report report_from_json(const Json& j);

// Parses a comma list such as "1,0.5,-inf".
std::vector<double> parse_real_list(const std::string& s);

struct RunConfig {
  std::string command = "verify";  // verify | sum | conv | compress | surface
  std::string a, b, out;
  std::string suite = "default";
  std::uint64_t seed = 0;
  int workers = 0;  // 0: CURVILIN_WORKERS or hardware concurrency
  std::optional<int> grid;
  std::optional<int> lambda_points;
  SumSpec spec;
  bool override_p = false;  // verify: force spec.p on every suite entry
  std::string format = "json";  // json | csv

  bool operator==(const RunConfig&) const;
};

Json to_json(const RunConfig& c);
RunConfig run_config_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace curvilin
