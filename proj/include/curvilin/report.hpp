#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace curvilin {

enum class Verdict { pass, refine, fail };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct Report {
  std::string check;
  std::uint64_t seed = 0;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  double lhs = 0;
  double rhs = 0;
  double slack = 0;
  double tol = 0;
  double grid = 0;  // finest output spacing used
  int lambda_points = 0;
  int refinements = 0;
  Verdict verdict = Verdict::pass;
};

inline constexpr double kExactTol = 1e-9;
// Grid paths: tol = kGridTolC * h * max(1, |rhs|), h the output spacing.
inline constexpr double kGridTolC = 2.0;
// Surface-area quotient checks: relative band.
inline constexpr double kSurfaceBand = 0.02;

double grid_tolerance(double h, double rhs);
double surface_tolerance(double rhs);

// slack = lhs - rhs; pass iff slack >= -tol.
void settle(Report& r);

}  // namespace curvilin
