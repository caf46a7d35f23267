#pragma once

// Exact counts of convex polyominoes by area, perimeter, both, and inside a
// symmetric-difference tube around a curve; uniform sampling by walking
// the counting DP backwards; and a brute-force enumerator used as oracle.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "polyldp/column_dp.hpp"
#include "polyldp/combinatorics.hpp"
#include "polyldp/curves.hpp"
#include "polyldp/distance.hpp"
#include "polyldp/lattice.hpp"

namespace polyldp {

enum class ConstraintKind { kArea, kPerimeter, kAreaPerimeter, kNone };

inline const char* constraint_name(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::kArea: return "area";
    case ConstraintKind::kPerimeter: return "perimeter";
    case ConstraintKind::kAreaPerimeter: return "area-perimeter";
    case ConstraintKind::kNone: return "none";
  }
  return "?";
}

/// Constraint on cell count and/or lattice perimeter. kNone is only
/// meaningful for tube counts, where the tube itself bounds the class.
struct Constraint {
  ConstraintKind kind = ConstraintKind::kArea;
  std::int64_t area = 0;
  std::int64_t perimeter = 0;

  static Constraint by_area(std::int64_t a) { return {ConstraintKind::kArea, a, 0}; }
  static Constraint by_perimeter(std::int64_t l) { return {ConstraintKind::kPerimeter, 0, l}; }
  static Constraint by_both(std::int64_t a, std::int64_t l) { return {ConstraintKind::kAreaPerimeter, a, l}; }
  static Constraint none() { return {ConstraintKind::kNone, 0, 0}; }

  bool has_area() const { return kind == ConstraintKind::kArea || kind == ConstraintKind::kAreaPerimeter; }
  bool has_perimeter() const {
    return kind == ConstraintKind::kPerimeter || kind == ConstraintKind::kAreaPerimeter;
  }
  bool admits(const Polyomino& p) const {
    return (!has_area() || p.area() == area) && (!has_perimeter() || p.perimeter() == perimeter);
  }
};

// ---------------------------------------------------------------------------
// Brute force.

struct EnumeratedPolyomino {
  Polyomino polyomino;
  bool convex = false;
};

inline constexpr int kBruteForceMaxArea = 12;

/// All fixed polyominoes with at most max_area cells, canonicalized to touch
/// x = 0 and y = 0, in order of area then cells.
inline std::vector<EnumeratedPolyomino> brute_force_enumerate(int max_area) {
  require(max_area <= kBruteForceMaxArea, ErrorKind::kPrecondition,
          "brute_force_enumerate: max_area above " + std::to_string(kBruteForceMaxArea));
  std::vector<EnumeratedPolyomino> out;
  if (max_area < 1) return out;
  // Cells of a canonical polyomino with <= 12 cells fit in [0, 11]^2, so each
  // packs into one byte and a whole shape into a fixed array.
  using Key = std::array<std::uint8_t, kBruteForceMaxArea>;
  auto pack = [](std::vector<Cell> cells) {
    int xmin = cells.front().x;
    int ymin = cells.front().y;
    for (const Cell& c : cells) {
      xmin = std::min(xmin, c.x);
      ymin = std::min(ymin, c.y);
    }
    Key key;
    key.fill(0xff);
    std::vector<std::uint8_t> codes;
    for (const Cell& c : cells) codes.push_back(static_cast<std::uint8_t>((c.x - xmin) * 12 + (c.y - ymin)));
    std::sort(codes.begin(), codes.end());
    std::copy(codes.begin(), codes.end(), key.begin());
    return key;
  };
  auto unpack = [](const Key& key) {
    std::vector<Cell> cells;
    for (std::uint8_t code : key) {
      if (code == 0xff) break;
      cells.push_back({code / 12, code % 12});
    }
    return cells;
  };
  std::vector<Key> level = {pack({{0, 0}})};
  for (int area = 1; area <= max_area; ++area) {
    for (const Key& key : level) {
      Polyomino p(unpack(key));
      const bool convex = is_convex(p);
      out.push_back({std::move(p), convex});
    }
    if (area == max_area) break;
    std::vector<Key> grown;
    for (const Key& key : level) {
      const auto cells = unpack(key);
      for (const Cell& c : cells) {
        for (const Cell& n : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1}, Cell{c.x, c.y - 1}}) {
          if (std::find(cells.begin(), cells.end(), n) != cells.end()) continue;
          auto bigger = cells;
          bigger.push_back(n);
          grown.push_back(pack(std::move(bigger)));
        }
      }
    }
    std::sort(grown.begin(), grown.end());
    grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
    level = std::move(grown);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counts up to translation.

/// Joint counts keyed by (area, perimeter) for all convex polyominoes with
/// area <= max_area and perimeter <= max_perimeter (either may be -1 for
/// "unbounded", but not both).
inline std::map<std::pair<int, int>, BigCount> count_convex_table(int max_area, int max_perimeter,
                                                                  int workers = 1) {
  require(max_area >= 0 || max_perimeter >= 0, ErrorKind::kPrecondition,
          "count_convex_table: need an area or perimeter bound");
  // A column is at most max_area cells or (max_perimeter / 2 - 1) cells tall,
  // and the polyomino spans at most as many rows above or below its first
  // column's bottom.
  int reach = max_area >= 0 ? max_area : max_perimeter / 2;
  if (max_area >= 0 && max_perimeter >= 0) reach = std::min(max_area, max_perimeter / 2);
  ProfileDpSpec spec;
  spec.rows = 2 * reach + 1;
  spec.columns = reach + 1;
  spec.translation = true;
  spec.anchor_row = reach;
  spec.max_area = max_area;
  spec.max_perimeter = max_perimeter >= 0 ? max_perimeter : 2 * max_area + 2;
  spec.workers = workers;
  auto result = run_profile_dp(spec);
  return result.finished;
}

inline BigCount count_convex_by_area(std::int64_t area, int workers = 1) {
  require(area >= 1, ErrorKind::kPrecondition, "count_convex_by_area: area must be >= 1");
  ProfileDpSpec spec;
  const int a = static_cast<int>(area);
  spec.rows = 2 * a + 1;
  spec.columns = a;
  spec.anchor_row = a;
  spec.max_area = a;
  spec.target_area = a;
  spec.workers = workers;
  BigCount total = 0;
  for (const auto& [key, c] : run_profile_dp(spec).finished) total += c;
  return total;
}

inline BigCount count_convex_by_perimeter(std::int64_t perimeter, int workers = 1) {
  require(perimeter >= 4 && perimeter % 2 == 0, ErrorKind::kPrecondition,
          "count_convex_by_perimeter: perimeter must be even and >= 4");
  ProfileDpSpec spec;
  const int half = static_cast<int>(perimeter / 2);
  spec.rows = 2 * half + 1;
  spec.columns = half;
  spec.anchor_row = half;
  spec.max_perimeter = static_cast<int>(perimeter);
  spec.target_perimeter = static_cast<int>(perimeter);
  spec.workers = workers;
  BigCount total = 0;
  for (const auto& [key, c] : run_profile_dp(spec).finished) total += c;
  return total;
}

struct JointCount {
  BigCount count = 0;
  bool feasible = true;  // false when 16 A > L^2
};

inline JointCount count_convex_by_area_perimeter(std::int64_t area, std::int64_t perimeter, int workers = 1) {
  require(area >= 1, ErrorKind::kPrecondition, "count_convex_by_area_perimeter: area must be >= 1");
  require(perimeter >= 4 && perimeter % 2 == 0, ErrorKind::kPrecondition,
          "count_convex_by_area_perimeter: perimeter must be even and >= 4");
  if (16 * area > perimeter * perimeter) return {0, false};
  // A convex polyomino has perimeter at most 2 A + 2.
  if (perimeter > 2 * area + 2) return {0, true};
  ProfileDpSpec spec;
  const int a = static_cast<int>(area);
  spec.rows = 2 * a + 1;
  spec.columns = a;
  spec.anchor_row = a;
  spec.max_area = a;
  spec.target_area = a;
  spec.max_perimeter = static_cast<int>(perimeter);
  spec.target_perimeter = static_cast<int>(perimeter);
  spec.workers = workers;
  BigCount total = 0;
  for (const auto& [key, c] : run_profile_dp(spec).finished) total += c;
  return {total, true};
}

// ---------------------------------------------------------------------------
// Tube counts (placed convention).

struct TubeOptions {
  /// Symmetric-difference budget is split into this many units.
  int resolution = 1024;
  /// Round per-column costs down (count is an upper bound) or up (lower bound).
  bool floor_mode = true;
  int workers = 1;
  double offset_x = 0.0;
  double offset_y = 0.0;
};

/// Cell window and costs for one tube count.
struct TubeWindow {
  GridPlacement grid;
  int col0 = 0, row0 = 0;  // grid indices of window column/row 0
  int columns = 0, rows = 0;
  int margin = 0;
  TubeCosts costs;
};

/// Builds the window: cells meeting the curve's bounding box, widened by the
/// largest number of cells wholly outside the region that fit in the budget.
inline TubeWindow build_tube_window(const UnimodalCurve& curve, double epsilon, std::int64_t n,
                                    const TubeOptions& options) {
  require(epsilon >= 0.0, ErrorKind::kPrecondition, "count_in_tube: epsilon must be >= 0");
  require(n >= 1, ErrorKind::kPrecondition, "count_in_tube: n must be >= 1");
  require(options.resolution >= 1, ErrorKind::kConfig, "count_in_tube: resolution must be >= 1");
  TubeWindow w;
  w.grid = {n, options.offset_x, options.offset_y};
  const double nd = static_cast<double>(n);
  int budget = options.resolution;
  double units_per_area = 0.0;
  if (epsilon == 0.0) {
    budget = 0;
    w.margin = 0;
  } else {
    units_per_area = options.resolution / epsilon;
    const auto per_cell = static_cast<std::int64_t>(std::floor(units_per_area / nd));
    require(per_cell >= 1, ErrorKind::kConfig,
            "count_in_tube: resolution too coarse for epsilon * n; raise --resolution");
    w.margin = static_cast<int>(options.resolution / per_cell);
  }
  const double h = w.grid.cell();
  const int c_first = static_cast<int>(std::floor(curve.xmin() / h - options.offset_x));
  const int c_last = static_cast<int>(std::ceil(curve.xmax() / h - options.offset_x)) - 1;
  const int r_first = static_cast<int>(std::floor(curve.ymin() / h - options.offset_y));
  const int r_last = static_cast<int>(std::ceil(curve.ymax() / h - options.offset_y)) - 1;
  w.col0 = c_first - w.margin;
  w.row0 = r_first - w.margin;
  w.columns = c_last - c_first + 1 + 2 * w.margin;
  w.rows = r_last - r_first + 1 + 2 * w.margin;

  TubeCosts& costs = w.costs;
  costs.budget = budget;
  costs.floor_mode = options.floor_mode;
  costs.units_per_cell = epsilon == 0.0 ? 0.0 : units_per_area / nd;
  auto to_units = [&](double area) {
    if (epsilon == 0.0) return area <= 1e-12 ? 0 : 1;
    const double u = area * units_per_area;
    const double r = options.floor_mode ? std::floor(u + 1e-9) : std::ceil(u - 1e-9);
    return static_cast<int>(std::min<double>(std::max(r, 0.0), budget + 1.0));
  };
  costs.pair_cost.assign(w.columns, std::vector<int>(static_cast<std::size_t>(w.rows) * w.rows, budget + 1));
  costs.empty_cost.assign(w.columns, 0);
  costs.region_cells.assign(w.columns, 0.0);
  for (int k = 0; k < w.columns; ++k) {
    const double x0 = w.grid.column_left(w.col0 + k);
    const double x1 = w.grid.column_left(w.col0 + k + 1);
    const double inside = curve.area_between(x0, x1);
    costs.empty_cost[k] = to_units(inside);
    costs.region_cells[k] = inside * nd;
    for (int b = 0; b < w.rows; ++b) {
      for (int t = b; t < w.rows; ++t) {
        const double d = slab_symmetric_difference(curve, x0, x1, w.grid.row_bottom(w.row0 + b),
                                                   w.grid.row_bottom(w.row0 + t + 1));
        costs.pair_cost[k][static_cast<std::size_t>(b) * w.rows + t] = to_units(d);
      }
    }
  }
  return w;
}

inline ProfileDpSpec tube_spec(const TubeWindow& w, const Constraint& constraint, int workers) {
  ProfileDpSpec spec;
  spec.rows = w.rows;
  spec.columns = w.columns;
  spec.translation = false;
  spec.tube = &w.costs;
  spec.workers = workers;
  if (constraint.has_area()) {
    spec.max_area = static_cast<int>(constraint.area);
    spec.target_area = static_cast<int>(constraint.area);
  }
  if (constraint.has_perimeter()) {
    spec.max_perimeter = static_cast<int>(constraint.perimeter);
    spec.target_perimeter = static_cast<int>(constraint.perimeter);
  }
  return spec;
}

struct TubeCount {
  BigCount count = 0;
  std::size_t peak_states = 0;
  std::size_t transitions = 0;
  int margin = 0;
};

/// Placed convex polyominoes on the 1/sqrt(n) grid satisfying the
/// constraint whose region is within symmetric-difference distance epsilon
/// of the curve's region, with per-column costs rounded as configured.
inline TubeCount count_in_tube_detailed(const UnimodalCurve& curve, double epsilon, std::int64_t n,
                                        const Constraint& constraint, const TubeOptions& options = {}) {
  const TubeWindow w = build_tube_window(curve, epsilon, n, options);
  const auto result = run_profile_dp(tube_spec(w, constraint, options.workers));
  TubeCount out;
  for (const auto& [key, c] : result.finished) out.count += c;
  out.peak_states = result.peak_states;
  out.transitions = result.transitions;
  out.margin = w.margin;
  return out;
}

inline BigCount count_in_tube(const UnimodalCurve& curve, double epsilon, std::int64_t n,
                              const Constraint& constraint, const TubeOptions& options = {}) {
  return count_in_tube_detailed(curve, epsilon, n, constraint, options).count;
}

struct TubeBracket {
  BigCount upper;  // costs rounded down
  BigCount lower;  // costs rounded up
};

inline TubeBracket count_in_tube_bracket(const UnimodalCurve& curve, double epsilon, std::int64_t n,
                                         const Constraint& constraint, TubeOptions options = {}) {
  TubeBracket out;
  options.floor_mode = true;
  out.upper = count_in_tube(curve, epsilon, n, constraint, options);
  options.floor_mode = false;
  out.lower = count_in_tube(curve, epsilon, n, constraint, options);
  return out;
}

// ---------------------------------------------------------------------------
// Uniform sampling up to translation.

/// Exact uniform samples from the convex polyominoes meeting the constraint,
/// canonicalized. Deterministic in `seed`.
inline std::vector<Polyomino> uniform_sample(const Constraint& constraint, int count, std::uint64_t seed) {
  require(constraint.kind != ConstraintKind::kNone, ErrorKind::kPrecondition,
          "uniform_sample: a constraint is required");
  require(count >= 0, ErrorKind::kPrecondition, "uniform_sample: count must be >= 0");
  ProfileDpSpec spec;
  int reach = 0;
  if (constraint.has_area()) {
    require(constraint.area >= 1 && constraint.area <= 4000, ErrorKind::kPrecondition,
            "uniform_sample: area out of range");
    reach = static_cast<int>(constraint.area);
    spec.max_area = reach;
    spec.target_area = reach;
  }
  if (constraint.has_perimeter()) {
    require(constraint.perimeter >= 4 && constraint.perimeter % 2 == 0, ErrorKind::kPrecondition,
            "uniform_sample: perimeter must be even and >= 4");
    const int half = static_cast<int>(constraint.perimeter / 2);
    reach = reach == 0 ? half : std::min(reach, half);
    spec.max_perimeter = static_cast<int>(constraint.perimeter);
    spec.target_perimeter = static_cast<int>(constraint.perimeter);
  }
  if (constraint.kind == ConstraintKind::kAreaPerimeter &&
      16 * constraint.area > constraint.perimeter * constraint.perimeter) {
    fail(ErrorKind::kInfeasible, "uniform_sample: 16 A > L^2, no convex polyomino exists");
  }
  spec.rows = 2 * reach + 1;
  spec.columns = reach;
  spec.anchor_row = reach;
  spec.keep_layers = true;
  ProfileDp<BigCount> dp(spec);
  const auto result = dp.run();
  const auto& layers = result.layers;
  const StateLayout& layout = dp.layout();

  // Sorted entries make the walk independent of hash-table slot order.
  std::vector<std::vector<std::pair<std::uint64_t, BigCount>>> sorted(layers.size());
  for (std::size_t k = 0; k < layers.size(); ++k) {
    sorted[k] = layers[k].entries();
    std::sort(sorted[k].begin(), sorted[k].end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  std::vector<std::pair<std::size_t, std::size_t>> finals;  // (layer, index)
  std::vector<BigCount> final_weight;
  BigCount total = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    for (std::size_t i = 0; i < sorted[k].size(); ++i) {
      if (!dp.can_finish(layout.unpack(sorted[k][i].first), static_cast<int>(k))) continue;
      finals.push_back({k, i});
      total += sorted[k][i].second;
      final_weight.push_back(total);
    }
  }
  if (total == 0) fail(ErrorKind::kInfeasible, "uniform_sample: constraint admits no polyomino");

  boost::random::mt19937_64 rng(seed);
  auto draw_below = [&](const BigCount& bound) {
    boost::random::uniform_int_distribution<BigCount> dist(0, bound - 1);
    return dist(rng);
  };

  std::vector<Polyomino> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int sample = 0; sample < count; ++sample) {
    BigCount r = draw_below(total);
    const auto pick = static_cast<std::size_t>(
        std::upper_bound(final_weight.begin(), final_weight.end(), r) - final_weight.begin());
    std::size_t k = finals[pick].first;
    ProfileState s = layout.unpack(sorted[k][finals[pick].second].first);
    std::vector<Cell> cells;
    while (true) {
      for (int y = s.b; y <= s.t; ++y) cells.push_back({static_cast<int>(k), y});
      const BigCount* here = layers[k].find(layout.pack(s));
      r = draw_below(*here);
      if (dp.is_start(s, static_cast<int>(k))) {
        if (r == 0) break;
        r -= 1;
      }
      require(k > 0, ErrorKind::kSolver, "uniform_sample: inconsistent DP layers");
      bool moved = false;
      for (const auto& [key, weight] : sorted[k - 1]) {
        const ProfileState prev = layout.unpack(key);
        const auto next = dp.successor(prev, static_cast<int>(k), s.b, s.t);
        if (!next || *next != s) continue;
        if (r < weight) {
          s = prev;
          --k;
          moved = true;
          break;
        }
        r -= weight;
      }
      require(moved, ErrorKind::kSolver, "uniform_sample: inconsistent DP layers");
    }
    out.push_back(Polyomino(std::move(cells)).canonical());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Count tables.

struct CountRow {
  std::int64_t n = 1;  // grid scale; 1 for counts on the unit lattice
  ConstraintKind kind = ConstraintKind::kArea;
  std::optional<std::int64_t> area;
  std::optional<std::int64_t> perimeter;
  std::optional<double> epsilon;
  std::string curve_id;
  BigCount count = 0;
  /// Brute-force count for the same row when it is in oracle range.
  std::optional<BigCount> oracle;
};

struct CountTable {
  std::vector<CountRow> rows;
  bool with_oracle = false;
};

/// Shortest decimal that round-trips.
inline std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline void write_count_csv(std::ostream& out, const CountTable& table) {
  out << "n,constraint_kind,A,L,epsilon,curve_id,count_decimal";
  if (table.with_oracle) out << ",oracle";
  out << '\n';
  for (const CountRow& row : table.rows) {
    out << row.n << ',' << constraint_name(row.kind) << ',';
    if (row.area) out << *row.area;
    out << ',';
    if (row.perimeter) out << *row.perimeter;
    out << ',';
    if (row.epsilon) out << format_real(*row.epsilon);
    out << ',' << row.curve_id << ',' << to_decimal(row.count);
    if (table.with_oracle) {
      out << ',';
      if (row.oracle) out << to_decimal(*row.oracle);
    }
    out << '\n';
  }
}

}  // namespace polyldp
