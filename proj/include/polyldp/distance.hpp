#pragma once

// Symmetric-difference distance between regions. Both polyominoes and
// unimodal regions are convex along every vertical line, so the area of
// the symmetric difference is an integral over x of 1-D interval
// symmetric differences.

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "polyldp/curves.hpp"
#include "polyldp/lattice.hpp"
#include "polyldp/quadrature.hpp"

namespace polyldp {

/// Column runs of a convex polyomino: x -> (bottom row, top row).
inline std::map<int, std::pair<int, int>> column_runs(const Polyomino& p) {
  std::map<int, std::pair<int, int>> runs;
  for (const Cell& c : p.cells()) {
    auto [it, fresh] = runs.try_emplace(c.x, c.y, c.y);
    if (!fresh) {
      it->second.first = std::min(it->second.first, c.y);
      it->second.second = std::max(it->second.second, c.y);
    }
  }
  return runs;
}

/// Area of the symmetric difference between the polyomino, drawn on the
/// grid, and the region bounded by the curve.
inline double symmetric_difference_area(const Polyomino& p, const GridPlacement& grid,
                                        const UnimodalCurve& region) {
  require(is_convex(p), ErrorKind::kPrecondition, "symmetric_difference_area: polyomino is not convex");
  double total = 0.0;
  double covered_region = 0.0;
  for (const auto& [x, run] : column_runs(p)) {
    const double x0 = grid.column_left(x);
    const double x1 = grid.column_left(x + 1);
    total += slab_symmetric_difference(region, x0, x1, grid.row_bottom(run.first),
                                       grid.row_bottom(run.second + 1));
    covered_region += region.area_between(x0, x1);
  }
  // Region area in columns the polyomino does not occupy.
  return total + std::max(0.0, region.area() - covered_region);
}

/// The polyomino's outline, scaled to the grid, as a polyline curve.
inline UnimodalCurve polyomino_region(const Polyomino& p, const GridPlacement& grid) {
  require(is_convex(p), ErrorKind::kPrecondition, "polyomino_region: polyomino is not convex");
  const auto runs = column_runs(p);
  std::vector<Point2> vertices;
  for (const auto& [x, run] : runs) {
    vertices.push_back({grid.column_left(x), grid.row_bottom(run.first)});
    vertices.push_back({grid.column_left(x + 1), grid.row_bottom(run.first)});
  }
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    vertices.push_back({grid.column_left(it->first + 1), grid.row_bottom(it->second.second + 1)});
    vertices.push_back({grid.column_left(it->first), grid.row_bottom(it->second.second + 1)});
  }
  // Drop repeated and collinear vertices.
  std::vector<Point2> clean;
  for (const Point2& v : vertices) {
    if (!clean.empty() && clean.back() == v) continue;
    clean.push_back(v);
  }
  while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
  std::vector<Point2> corners;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const Point2& a = clean[(i + clean.size() - 1) % clean.size()];
    const Point2& b = clean[i];
    const Point2& c = clean[(i + 1) % clean.size()];
    const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (cross != 0.0) corners.push_back(b);
  }
  return UnimodalCurve::polyline(std::move(corners), "polyomino");
}

/// Area of the symmetric difference of the regions bounded by two curves.
inline double region_distance(const UnimodalCurve& a, const UnimodalCurve& b) {
  const double x0 = std::min(a.xmin(), b.xmin());
  const double x1 = std::max(a.xmax(), b.xmax());
  std::vector<double> cuts = {x0, x1, a.xmin(), a.xmax(), b.xmin(), b.xmax()};
  cuts.insert(cuts.end(), a.breakpoints().begin(), a.breakpoints().end());
  cuts.insert(cuts.end(), b.breakpoints().begin(), b.breakpoints().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto section = [](const UnimodalCurve& c, double x) -> std::pair<double, double> {
    if (x < c.xmin() || x > c.xmax()) return {0.0, 0.0};
    return {c.lower(x), c.upper(x)};
  };
  auto integrand = [&](double x) {
    const auto [la, ha] = section(a, x);
    const auto [lb, hb] = section(b, x);
    const double common = std::max(0.0, std::min(ha, hb) - std::max(la, lb));
    return (ha - la) + (hb - lb) - 2.0 * common;
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    // Crossings of the two boundaries inside a cell are kinks; adaptive
    // subdivision resolves them.
    total += integrate(integrand, cuts[i], cuts[i + 1], 1e-13, 20000).value;
  }
  return total;
}

}  // namespace polyldp
