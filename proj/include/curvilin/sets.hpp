#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace curvilin {

struct IntervalUnion {
  std::vector<std::pair<double, double>> intervals;

  double length() const;
  bool empty() const { return intervals.empty(); }
};

IntervalUnion normalize(IntervalUnion u);
double volume(const IntervalUnion& u);

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

struct BoxUnion {
  int dim = 2;
  std::vector<Box> boxes;
};

// Exact union volume by coordinate sweep (d = 2 or 3).
double volume(const BoxUnion& a);

// Uniform grid over a box; cells are row-major with axis 0 slowest.
struct Grid {
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<std::size_t> shape;

  Grid() = default;
  Grid(std::vector<double> origin_, std::vector<double> spacing_, std::vector<std::size_t> shape_);
  static Grid uniform(std::size_t dims, double h, std::size_t cells_per_axis);

  std::size_t dims() const { return shape.size(); }
  std::size_t cells() const;
  double cell_volume() const;
  double lower(std::size_t axis, std::size_t i) const { return origin[axis] + double(i) * spacing[axis]; }
  double upper(std::size_t axis, std::size_t i) const { return origin[axis] + double(i + 1) * spacing[axis]; }
  std::vector<std::size_t> unflatten(std::size_t index) const;
  std::size_t flatten(const std::vector<std::size_t>& idx) const;
  double min_spacing() const;
  bool operator==(const Grid&) const = default;
};

// Compressed set: hypograph of a per-cell segment function.
struct StaircaseSet {
  Grid grid;
  std::vector<double> heights;

  std::size_t base_dims() const { return grid.dims(); }
  double volume() const;
  double max_height() const;
  double max_coordinate(std::size_t axis) const;
  bool empty() const;
};

struct CellMask {
  Grid grid;
  std::vector<std::uint8_t> inside;

  double volume() const;
  std::size_t count() const;
};

struct SectionProfile {
  int k = 0;
  Grid grid;  // over H-perp; zero dimensions when k = n
  std::vector<double> values;
  double sup_norm = 0;
};

// Base grid aligned with every box edge (dyadic spacing, origin 0).
Grid aligned_base_grid(const BoxUnion& a);
StaircaseSet compress(const BoxUnion& a, const std::optional<Grid>& base = std::nullopt);
// One box per nonempty cell column.
BoxUnion realize(const StaircaseSet& s);

SectionProfile section_profile(const StaircaseSet& s, int k);
SectionProfile section_profile(const BoxUnion& a, int k);
CellMask superlevel(const SectionProfile& profile, double r);
StaircaseSet normalized_compression(const StaircaseSet& s, int k);
StaircaseSet as_staircase(const SectionProfile& profile);
StaircaseSet indicator(const CellMask& m);

// Each cell split into factor^n equal subcells; same set.
StaircaseSet subdivide(const StaircaseSet& s, std::size_t factor);

// Neumaier-compensated sum, order dependent but deterministic.
double compensated_sum(const std::vector<double>& xs);

struct CompensatedSum {
  double sum = 0;
  double comp = 0;
  void add(double x);
  double value() const { return sum + comp; }
};

}  // namespace curvilin
