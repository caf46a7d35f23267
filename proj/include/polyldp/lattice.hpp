#pragma once

// Polyominoes on the square lattice: convexity, perimeter, bounding boxes,
// extreme points and the four-staircase boundary decomposition.

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polyldp/combinatorics.hpp"
#include "polyldp/error.hpp"

namespace polyldp {

/// Unit cell [x, x+1] x [y, y+1].
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct BoundingBox {
  int xmin = 0, xmax = 0, ymin = 0, ymax = 0;

  int width() const { return xmax - xmin + 1; }
  int height() const { return ymax - ymin + 1; }
  int perimeter() const { return 2 * (width() + height()); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// A finite, nonempty, 4-connected set of cells. Immutable; cells are kept
/// in lexicographic (x, y) order.
class Polyomino {
 public:
  explicit Polyomino(std::vector<Cell> cells) : cells_(std::move(cells)) {
    require(!cells_.empty(), ErrorKind::kInvalidInput, "polyomino: no cells");
    std::sort(cells_.begin(), cells_.end());
    require(std::adjacent_find(cells_.begin(), cells_.end()) == cells_.end(),
            ErrorKind::kInvalidInput, "polyomino: duplicate cell");

    bbox_ = {cells_.front().x, cells_.back().x, cells_.front().y, cells_.front().y};
    for (const Cell& c : cells_) {
      bbox_.ymin = std::min(bbox_.ymin, c.y);
      bbox_.ymax = std::max(bbox_.ymax, c.y);
    }

    std::int64_t adjacencies = 0;
    for (const Cell& c : cells_) {
      if (contains({c.x + 1, c.y})) ++adjacencies;
      if (contains({c.x, c.y + 1})) ++adjacencies;
    }
    perimeter_ = 4 * static_cast<std::int64_t>(cells_.size()) - 2 * adjacencies;
    require(connected(), ErrorKind::kInvalidInput, "polyomino: cells are not 4-connected");
  }

  const std::vector<Cell>& cells() const { return cells_; }
  std::int64_t area() const { return static_cast<std::int64_t>(cells_.size()); }
  /// Edge count 4A - 2 (side-adjacent pairs).
  std::int64_t perimeter() const { return perimeter_; }
  const BoundingBox& bbox() const { return bbox_; }

  bool contains(Cell c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

  /// Same shape moved so that its bounding box starts at (0, 0).
  Polyomino canonical() const {
    std::vector<Cell> moved;
    moved.reserve(cells_.size());
    for (const Cell& c : cells_) moved.push_back({c.x - bbox_.xmin, c.y - bbox_.ymin});
    return Polyomino(std::move(moved));
  }

  Polyomino translated(int dx, int dy) const {
    std::vector<Cell> moved;
    moved.reserve(cells_.size());
    for (const Cell& c : cells_) moved.push_back({c.x + dx, c.y + dy});
    return Polyomino(std::move(moved));
  }

  friend bool operator==(const Polyomino& a, const Polyomino& b) { return a.cells_ == b.cells_; }
  friend bool operator<(const Polyomino& a, const Polyomino& b) { return a.cells_ < b.cells_; }

 private:
  bool connected() const {
    std::vector<bool> seen(cells_.size(), false);
    std::vector<std::size_t> stack = {0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const Cell c = cells_[stack.back()];
      stack.pop_back();
      const std::array<Cell, 4> around = {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y},
                                          Cell{c.x, c.y + 1}, Cell{c.x, c.y - 1}};
      for (const Cell& n : around) {
        auto it = std::lower_bound(cells_.begin(), cells_.end(), n);
        if (it == cells_.end() || *it != n) continue;
        const auto idx = static_cast<std::size_t>(it - cells_.begin());
        if (seen[idx]) continue;
        seen[idx] = true;
        ++reached;
        stack.push_back(idx);
      }
    }
    return reached == cells_.size();
  }

  std::vector<Cell> cells_;
  BoundingBox bbox_;
  std::int64_t perimeter_ = 0;
};

/// Every row and every column of cells forms a single contiguous run.
inline bool is_convex(const Polyomino& p) {
  std::map<int, std::pair<int, int>> rows;  // y -> (min x, max x)
  std::map<int, std::pair<int, int>> cols;  // x -> (min y, max y)
  std::map<int, int> row_count, col_count;
  for (const Cell& c : p.cells()) {
    auto [rit, rnew] = rows.try_emplace(c.y, c.x, c.x);
    if (!rnew) rit->second = {std::min(rit->second.first, c.x), std::max(rit->second.second, c.x)};
    auto [cit, cnew] = cols.try_emplace(c.x, c.y, c.y);
    if (!cnew) cit->second = {std::min(cit->second.first, c.y), std::max(cit->second.second, c.y)};
    ++row_count[c.y];
    ++col_count[c.x];
  }
  for (const auto& [y, span] : rows) {
    if (span.second - span.first + 1 != row_count[y]) return false;
  }
  for (const auto& [x, span] : cols) {
    if (span.second - span.first + 1 != col_count[x]) return false;
  }
  return true;
}

inline bool circumscribed_perimeter_matches(const Polyomino& p) {
  return p.perimeter() == p.bbox().perimeter();
}

struct IsoperimetricCheck {
  bool holds = false;
  bool equality = false;
};

/// A <= L^2 / 16, compared exactly as 16 A <= L^2.
inline IsoperimetricCheck isoperimetric_holds(const Polyomino& p) {
  const std::int64_t lhs = 16 * p.area();
  const std::int64_t rhs = p.perimeter() * p.perimeter();
  return {lhs <= rhs, lhs == rhs};
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Cell centers in the extreme rows and columns.
struct ExtremePoints {
  Point2 north, east, south, west;
};

/// N: leftmost cell of the top row. S: leftmost cell of the bottom row.
/// E: bottom-most cell of the rightmost column. W: bottom-most cell of the
/// leftmost column.
inline ExtremePoints extreme_points(const Polyomino& p) {
  require(is_convex(p), ErrorKind::kPrecondition, "extreme_points: polyomino is not convex");
  const BoundingBox& box = p.bbox();
  Cell north{std::numeric_limits<int>::max(), box.ymax};
  Cell south{std::numeric_limits<int>::max(), box.ymin};
  Cell east{box.xmax, std::numeric_limits<int>::max()};
  Cell west{box.xmin, std::numeric_limits<int>::max()};
  for (const Cell& c : p.cells()) {
    if (c.y == box.ymax) north.x = std::min(north.x, c.x);
    if (c.y == box.ymin) south.x = std::min(south.x, c.x);
    if (c.x == box.xmax) east.y = std::min(east.y, c.y);
    if (c.x == box.xmin) west.y = std::min(west.y, c.y);
  }
  auto center = [](Cell c) { return Point2{c.x + 0.5, c.y + 0.5}; };
  return {center(north), center(east), center(south), center(west)};
}

enum class StepAxis : std::uint8_t { kHorizontal, kVertical };

/// Quadrant a boundary staircase lives in, named by where it sits on the
/// polyomino. Counterclockwise traversal fixes the step signs.
enum class Quadrant : std::uint8_t { kNorthEast, kNorthWest, kSouthWest, kSouthEast };

inline const char* quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::kNorthEast: return "NE";
    case Quadrant::kNorthWest: return "NW";
    case Quadrant::kSouthWest: return "SW";
    case Quadrant::kSouthEast: return "SE";
  }
  return "?";
}

/// Direction of a unit step of the given axis inside a quadrant staircase,
/// traversed counterclockwise.
inline LatticePoint quadrant_step(Quadrant q, StepAxis axis) {
  const bool h = axis == StepAxis::kHorizontal;
  switch (q) {
    case Quadrant::kNorthEast: return h ? LatticePoint{-1, 0} : LatticePoint{0, 1};
    case Quadrant::kNorthWest: return h ? LatticePoint{-1, 0} : LatticePoint{0, -1};
    case Quadrant::kSouthWest: return h ? LatticePoint{1, 0} : LatticePoint{0, -1};
    case Quadrant::kSouthEast: return h ? LatticePoint{1, 0} : LatticePoint{0, 1};
  }
  return {};
}

/// A staircase lattice path, weakly monotone in both coordinates.
struct MonotoneBoundary {
  LatticePoint start;
  LatticePoint end;
  std::vector<StepAxis> steps;
  Quadrant orientation = Quadrant::kNorthEast;

  /// start + sum(steps) == end.
  bool consistent() const {
    LatticePoint at = start;
    for (StepAxis s : steps) {
      const LatticePoint d = quadrant_step(orientation, s);
      at.x += d.x;
      at.y += d.y;
    }
    return at == end;
  }
};

/// Splits the counterclockwise boundary of a convex polyomino into its four
/// staircases, cut at the bounding-box contact points matching the extreme
/// point rule: E = bottom-right corner of the E cell, N = top-left corner of
/// the N cell, W = bottom-left corner of the W cell, S = bottom-left corner
/// of the S cell. Returned in order NE, NW, SW, SE.
inline std::array<MonotoneBoundary, 4> boundary_decomposition(const Polyomino& p) {
  require(is_convex(p), ErrorKind::kPrecondition,
          "boundary_decomposition: polyomino is not convex");
  // Directed boundary edges, counterclockwise around the region.
  std::map<LatticePoint, LatticePoint> next;
  for (const Cell& c : p.cells()) {
    if (!p.contains({c.x, c.y - 1})) next[{c.x, c.y}] = {c.x + 1, c.y};
    if (!p.contains({c.x + 1, c.y})) next[{c.x + 1, c.y}] = {c.x + 1, c.y + 1};
    if (!p.contains({c.x, c.y + 1})) next[{c.x + 1, c.y + 1}] = {c.x, c.y + 1};
    if (!p.contains({c.x - 1, c.y})) next[{c.x, c.y + 1}] = {c.x, c.y};
  }
  const ExtremePoints ext = extreme_points(p);
  const BoundingBox& box = p.bbox();
  const LatticePoint cut_e{box.xmax + 1, static_cast<int>(ext.east.y - 0.5)};
  const LatticePoint cut_n{static_cast<int>(ext.north.x - 0.5), box.ymax + 1};
  const LatticePoint cut_w{box.xmin, static_cast<int>(ext.west.y - 0.5)};
  const LatticePoint cut_s{static_cast<int>(ext.south.x - 0.5), box.ymin};

  const std::array<LatticePoint, 5> cuts = {cut_e, cut_n, cut_w, cut_s, cut_e};
  const std::array<Quadrant, 4> order = {Quadrant::kNorthEast, Quadrant::kNorthWest,
                                         Quadrant::kSouthWest, Quadrant::kSouthEast};
  std::array<MonotoneBoundary, 4> out;
  std::size_t walked = 0;
  for (int k = 0; k < 4; ++k) {
    MonotoneBoundary& seg = out[k];
    seg.orientation = order[k];
    seg.start = cuts[k];
    seg.end = cuts[k + 1];
    LatticePoint at = cuts[k];
    while (at != cuts[k + 1]) {
      auto it = next.find(at);
      require(it != next.end() && walked <= next.size(), ErrorKind::kInvalidInput,
              "boundary_decomposition: boundary is not a simple cycle");
      const LatticePoint to = it->second;
      const StepAxis axis = to.y == at.y ? StepAxis::kHorizontal : StepAxis::kVertical;
      const LatticePoint expect = quadrant_step(seg.orientation, axis);
      require(to.x - at.x == expect.x && to.y - at.y == expect.y, ErrorKind::kInvalidInput,
              std::string("boundary_decomposition: non-monotone step in ") +
                  quadrant_name(seg.orientation));
      seg.steps.push_back(axis);
      at = to;
      ++walked;
    }
  }
  require(walked == next.size(), ErrorKind::kInvalidInput,
          "boundary_decomposition: boundary has more than one component");
  return out;
}

// Text format: one "x y" line per cell, lexicographically sorted. Several
// polyominoes in one stream are separated by blank lines.

inline void write_polyomino(std::ostream& out, const Polyomino& p) {
  for (const Cell& c : p.cells()) out << c.x << ' ' << c.y << '\n';
}

inline std::vector<Polyomino> read_polyominoes(std::istream& in) {
  std::vector<Polyomino> result;
  std::vector<Cell> current;
  std::set<Cell> seen;
  std::string line;
  int line_no = 0;
  auto flush = [&] {
    if (!current.empty()) result.emplace_back(std::move(current));
    current.clear();
    seen.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      flush();
      continue;
    }
    std::istringstream fields(line);
    Cell c;
    std::string extra;
    if (!(fields >> c.x >> c.y) || (fields >> extra)) {
      fail(ErrorKind::kInvalidInput, "polyomino text: malformed line " + std::to_string(line_no));
    }
    if (!seen.insert(c).second) {
      fail(ErrorKind::kInvalidInput, "polyomino text: duplicate cell on line " + std::to_string(line_no));
    }
    current.push_back(c);
  }
  flush();
  return result;
}

inline Polyomino read_polyomino(std::istream& in) {
  auto all = read_polyominoes(in);
  require(all.size() == 1, ErrorKind::kInvalidInput, "polyomino text: expected exactly one polyomino");
  return std::move(all.front());
}

}  // namespace polyldp
