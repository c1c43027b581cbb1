#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "curvilin/curvsum.hpp"
#include "curvilin/funcs.hpp"
#include "curvilin/io.hpp"
#include "curvilin/measures.hpp"
#include "curvilin/report.hpp"
#include "curvilin/sets.hpp"

namespace curvilin {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return double(engine_() >> 11) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform on {lo, ..., hi}.
  int integer(int lo, int hi) { return lo + int(engine_() % std::uint64_t(hi - lo + 1)); }
  bool coin(double prob) { return uniform() < prob; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t instance_seed(std::uint64_t base, const std::string& check, std::size_t index);

// Generators. Coordinates are dyadic so exact paths and oracles align.
IntervalUnion random_interval_union(Rng& rng, int max_intervals, double range, double unit = 1.0 / 16);
BoxUnion random_box_union(Rng& rng, int dim, int max_boxes, double range, double unit = 1.0 / 8);
// levels > 0: heights drawn from max_height * {1..levels}/levels; levels = 0: continuous.
StaircaseSet random_staircase(Rng& rng, std::size_t n, std::size_t cells, double h, double max_height, int levels,
                              double fill);
// Staircase anchored at the origin with heights nonincreasing along every axis.
StaircaseSet random_down_set(Rng& rng, std::size_t n, std::size_t cells, double h, double max_height);
// A single box [0, m h]^n x [0, H] on the grid.
StaircaseSet random_box_staircase(Rng& rng, std::size_t n, std::size_t cells, double h, double max_height);
CellMask random_cell_mask(Rng& rng, const Grid& grid, double fill);

// Knobs a check run may change between refinement rounds.
struct Attempt {
  int lambda_points = 64;
  int refine = 4;
};

// Doubles lambda density (L -> 2L + 1) and output resolution while the
// check fails; verdict refine only when a size cap stops the loop.
Report run_refined(const std::function<Report(const Attempt&)>& check, Attempt base, int max_doublings = 2);

// Individual checks. Each fills lhs, rhs, tol, grid and params and settles the verdict.
Report check_mean_identity(double a, double b, double p, double t, double alpha, int grid_points = 10000);
Report check_holder(double a, double b, double c, double d, const MeanParams& params, double alpha, double beta);
Report check_lemma_1d(const IntervalUnion& k, const IntervalUnion& l, const SumSpec& spec);
Report check_compression_monotone(const BoxUnion& a, const BoxUnion& b, const SumSpec& spec);
Report check_bm_curvilinear(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec);
Report check_refinement(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec);
Report check_normalized_bm(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec);
// spec.alphas = (1,..,1, alpha); beta pairs with alpha; H = first k base axes.
Report check_sectional(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& spec, double beta, int k);
Report check_bbl(const GridFunction& f, const GridFunction& g, const SumSpec& spec);
Report check_marginal_bbl(const GridFunction& f, const GridFunction& g, const SumSpec& spec, double beta, int k);
// a, b refine onto mu's density grid (n = 2); sums use p, t of spec.
Report check_measure_bm(const CellMask& a, const CellMask& b, const DensityMeasure& mu, const SumSpec& spec,
                        double beta, int k);
// Lebesgue, F = x^{p gamma}.
Report check_minkowski_first(const StaircaseSet& a, const StaircaseSet& b, double p, const PowerVector& alphas,
                             const SurfaceOptions& opt = {});
Report check_minkowski_first_funcs(const GridFunction& f, const GridFunction& g, double p, const PowerVector& alphas,
                                   const SurfaceOptions& opt = {});
Report check_mixed_volume(const StaircaseSet& a, const StaircaseSet& b, double p, const PowerVector& alphas,
                          const SurfaceOptions& opt = {});
// Containment small-sum within one output cell of large-sum.
Report check_power_monotonicity(const StaircaseSet& a, const StaircaseSet& b, const SumSpec& small,
                                const SumSpec& large);

// Registry: each check id maps to a seeded generator and a runner over JSON instances.
struct CheckDef {
  std::string id;
  std::function<Json(Rng&, const Json& params)> generate;
  std::function<Report(const Json& instance, const Attempt&)> run;
};

const std::vector<CheckDef>& check_registry();
const CheckDef& find_check(const std::string& id);

// Generates instance `index` of a check and runs it with refinement.
Report run_instance(const CheckDef& def, const Json& params, std::uint64_t seed, std::size_t index, Attempt base);

// Greedy reduction of a failing instance (drop boxes, intervals or cells; halve values).
Json shrink(const std::function<Report(const Json&)>& check, const Json& instance);

struct SuiteEntry {
  std::string check;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  Json params = Json::object();
};

struct Suite {
  std::string name;
  std::vector<SuiteEntry> entries;
};

Suite suite_from_json(const Json& j);
Json to_json(const Suite& s);
// Built-in manifests: "default", "smoke".
Suite builtin_suite(const std::string& name);

struct SuiteOptions {
  std::uint64_t seed = 0;  // mixed into every entry seed
  int workers = 0;
  Attempt attempt;
  std::optional<double> p;  // override every entry's p
  std::optional<int> cells;  // override staircase resolution
};

struct SuiteResult {
  std::vector<Report> reports;  // entry order, then instance order
  std::string jsonl() const;
  std::string summary_csv() const;
  bool any_fail() const;
};

SuiteResult run_suite(const Suite& suite, const SuiteOptions& opt);

int resolve_workers(int requested);

}  // namespace curvilin
