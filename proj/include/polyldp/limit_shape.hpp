#pragma once

// Extremal curves for the entropy integral under area and/or perimeter
// constraints, built from scaled Vershik arcs placed in the four quadrants.
//
//  {A}     four congruent Vershik arcs, each bounding a quarter of the area.
//  {L}     the diamond |x| + |y| = L/8 (every slope has |y'| = 1, where the
//          integrand attains its maximum of one bit per unit length).
//  {A, L}  four congruent arcs  e^{-bx} + e^{-by} = 1 + e^{-b}  in boxes of
//          side L/8; the shape parameter b is solved from the area. b > 0
//          gives a Vershik-type arc, b = 0 a straight edge, b < 0 the arc
//          bent outward toward the box corner; b -> -inf is the square.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polyldp/curves.hpp"
#include "polyldp/entropy.hpp"
#include "polyldp/error.hpp"
#include "polyldp/quadrature.hpp"

namespace polyldp {

/// Continuum constraint family: area and/or box perimeter.
struct ShapeConstraint {
  std::optional<double> area;
  std::optional<double> perimeter;

  static ShapeConstraint by_area(double a) { return {a, std::nullopt}; }
  static ShapeConstraint by_perimeter(double l) { return {std::nullopt, l}; }
  static ShapeConstraint by_both(double a, double l) { return {a, l}; }

  std::string key() const {
    std::ostringstream out;
    out.precision(17);
    out << "A=";
    if (area) out << *area;
    out << ";L=";
    if (perimeter) out << *perimeter;
    return out.str();
  }
};

struct LimitShapeParams {
  std::string family;
  /// Linear scale of the arc in each quadrant (NE, NW, SW, SE).
  std::array<double, 4> quadrant_scale{};
  /// Arc shape parameter in the unit box; +inf for the pure Vershik arc.
  double beta = std::numeric_limits<double>::infinity();
  double width = 0.0;
  double height = 0.0;
  std::optional<double> target_area;
  std::optional<double> target_perimeter;
  /// Relative constraint residuals of the built curve.
  double area_residual = 0.0;
  double perimeter_residual = 0.0;
  int iterations = 0;
  double integral = 0.0;
};

struct LimitShape {
  UnimodalCurve curve;
  LimitShapeParams params;
};

inline constexpr double kLimitShapeTolerance = 1e-8;

// ---------------------------------------------------------------------------
// Unit-box arcs through (1, 0) and (0, 1).

namespace detail {

/// log(e^{-c} - expm1(-d)) for c, d >= 0, accurate whether the argument is
/// near 0 or near 1.
inline double log_arc_term(double c, double d) {
  const double w = std::exp(-c) - std::expm1(-d);
  if (w < 0.5) return std::log(w);
  return std::log1p(std::expm1(-c) - std::expm1(-d));
}

}  // namespace detail

/// Height of the unit-box arc at x in [0, 1]; by symmetry also x(y).
inline double box_arc_value(double beta, double x) {
  if (beta == 0.0) return 1.0 - x;
  if (beta > 0.0) return -detail::log_arc_term(beta, beta * x) / beta;
  const double g = -beta;
  return 1.0 + detail::log_arc_term(g, g * (1.0 - x)) / g;
}

inline double box_arc_slope(double beta, double x) {
  if (beta == 0.0) return -1.0;
  return -std::exp(beta * (box_arc_value(beta, x) - x));
}

/// Where the arc crosses the diagonal (slope -1).
inline double box_arc_midpoint(double beta) {
  if (beta == 0.0) return 0.5;
  if (beta > 0.0) return -std::log1p(0.5 * std::expm1(-beta)) / beta;
  const double g = -beta;
  return 1.0 + std::log(0.5 * (1.0 + std::exp(-g))) / g;
}

/// Counterclockwise first-quadrant pieces from (1, 0) to (0, 1).
inline std::vector<CurvePiece> box_arc_pieces(double beta) {
  if (beta == 0.0) return {linear_piece({1.0, 0.0}, {0.0, 1.0})};
  const double xm = box_arc_midpoint(beta);
  auto value = [beta](double u) { return box_arc_value(beta, u); };
  auto slope = [beta](double u) { return box_arc_slope(beta, u); };
  CurvePiece over_x;
  over_x.axis = PieceAxis::kGraphOverX;
  over_x.value = value;
  over_x.slope = slope;
  over_x.reversed = true;
  CurvePiece over_y = over_x;
  over_y.axis = PieceAxis::kGraphOverY;
  over_y.reversed = false;
  if (beta > 0.0) {
    // Flat near (1, 0): x from 1 down to xm, then steep up to (0, 1).
    over_x.u0 = xm;
    over_x.u1 = 1.0;
    over_y.u0 = xm;
    over_y.u1 = 1.0;
    return {over_x, over_y};
  }
  // Steep near (1, 0): y from 0 up to xm, then flat out to (0, 1).
  over_y.u0 = 0.0;
  over_y.u1 = xm;
  over_x.u0 = 0.0;
  over_x.u1 = xm;
  return {over_y, over_x};
}

/// Fraction of the unit box under the arc; decreasing in beta, 1/2 at 0.
inline double box_arc_fill(double beta) {
  if (beta == 0.0) return 0.5;
  const double xm = box_arc_midpoint(beta);
  auto f = [beta](double x) { return box_arc_value(beta, x); };
  // The region is symmetric about the diagonal: twice its part above it.
  return 2.0 * integrate([&](double x) { return f(x) - x; }, 0.0, xm, 1e-14, 4000).value;
}

// ---------------------------------------------------------------------------

inline LimitShape build_area_shape(double area) {
  require(area > 0.0, ErrorKind::kPrecondition, "build_limit_shape: area must be positive");
  const double s = 0.5 * std::sqrt(area);
  auto curve = four_quadrant_curve(vershik_arc_pieces(), {s, s, s, s}, "vershik-composite");
  LimitShapeParams params;
  params.family = "area";
  params.quadrant_scale = {s, s, s, s};
  params.width = params.height = 2.0 * s * kVershikTail / kVershikRate;
  params.target_area = area;
  params.area_residual = std::fabs(curve.area() - area) / area;
  params.integral = entropy_integral(curve).total;
  return {std::move(curve), params};
}

inline LimitShape build_perimeter_shape(double perimeter) {
  require(perimeter > 0.0, ErrorKind::kPrecondition, "build_limit_shape: perimeter must be positive");
  const double r = perimeter / 8.0;
  auto curve = UnimodalCurve::polyline({{r, 0}, {0, r}, {-r, 0}, {0, -r}}, "vershik-composite");
  LimitShapeParams params;
  params.family = "perimeter";
  params.quadrant_scale = {r, r, r, r};
  params.beta = 0.0;
  params.width = params.height = 2.0 * r;
  params.target_perimeter = perimeter;
  params.perimeter_residual = std::fabs(curve.box_perimeter() - perimeter) / perimeter;
  params.integral = entropy_integral(curve).total;
  return {std::move(curve), params};
}

inline LimitShape build_area_perimeter_shape(double area, double perimeter) {
  require(area > 0.0 && perimeter > 0.0, ErrorKind::kPrecondition,
          "build_limit_shape: area and perimeter must be positive");
  const double fill = 16.0 * area / (perimeter * perimeter);
  if (fill > 1.0 + 1e-12) {
    fail(ErrorKind::kInfeasible, "build_limit_shape: inadmissible constraint, 16 A > L^2 (16 A / L^2 = " +
                                     std::to_string(fill) + ")");
  }
  const double q = perimeter / 8.0;
  LimitShapeParams params;
  params.family = "area-perimeter";
  params.quadrant_scale = {q, q, q, q};
  params.width = params.height = 2.0 * q;
  params.target_area = area;
  params.target_perimeter = perimeter;

  std::optional<UnimodalCurve> curve;
  if (fill >= 1.0 - 1e-12) {
    params.beta = -std::numeric_limits<double>::infinity();
    curve = UnimodalCurve::polyline({{-q, -q}, {q, -q}, {q, q}, {-q, q}}, "vershik-composite");
  } else {
    constexpr double kBetaMax = 700.0;
    const double lo_fill = box_arc_fill(kBetaMax);
    const double hi_fill = box_arc_fill(-kBetaMax);
    if (!(fill > lo_fill && fill < hi_fill)) {
      fail(ErrorKind::kSolver, "build_limit_shape: inadmissible or unresolved (A, L): fill " +
                                   std::to_string(fill) + " outside solver range [" + std::to_string(lo_fill) +
                                   ", " + std::to_string(hi_fill) + "]");
    }
    double lo = -kBetaMax;
    double hi = kBetaMax;
    int iter = 0;
    for (; iter < 200 && hi - lo > 1e-13 * std::max(1.0, std::fabs(lo)); ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (box_arc_fill(mid) > fill) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    double beta = 0.5 * (lo + hi);
    if (std::fabs(beta) < 1e-9) beta = 0.0;
    params.beta = beta;
    params.iterations = iter;
    curve = four_quadrant_curve(box_arc_pieces(beta), {q, q, q, q}, "vershik-composite");
  }
  params.area_residual = std::fabs(curve->area() - area) / area;
  params.perimeter_residual = std::fabs(curve->box_perimeter() - perimeter) / perimeter;
  params.integral = entropy_integral(*curve).total;
  if (params.area_residual > kLimitShapeTolerance || params.perimeter_residual > kLimitShapeTolerance) {
    fail(ErrorKind::kSolver, "build_limit_shape: residuals too large (area " +
                                 std::to_string(params.area_residual) + ", perimeter " +
                                 std::to_string(params.perimeter_residual) + ")");
  }
  return {std::move(*curve), params};
}

inline LimitShape build_limit_shape(const ShapeConstraint& c) {
  if (c.area && c.perimeter) return build_area_perimeter_shape(*c.area, *c.perimeter);
  if (c.area) return build_area_shape(*c.area);
  if (c.perimeter) return build_perimeter_shape(*c.perimeter);
  fail(ErrorKind::kPrecondition, "build_limit_shape: empty constraint");
}

}  // namespace polyldp
