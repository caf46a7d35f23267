#pragma once

// Closed curves that are unimodal in both axis directions, stored as a
// counterclockwise chain of monotone differentiable pieces. Each piece is a
// graph over x or over y; builders choose the axis so that |slope| <= 1,
// which keeps every integrand bounded near the four tangent points.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyldp/combinatorics.hpp"
#include "polyldp/error.hpp"
#include "polyldp/lattice.hpp"
#include "polyldp/quadrature.hpp"

namespace polyldp {

enum class PieceAxis : std::uint8_t { kGraphOverX, kGraphOverY };

/// One monotone piece. For kGraphOverX the points are (u, value(u)); for
/// kGraphOverY they are (value(u), u); u ranges over [u0, u1] with u0 < u1.
/// `reversed` means counterclockwise traversal runs from u1 to u0.
struct CurvePiece {
  PieceAxis axis = PieceAxis::kGraphOverX;
  double u0 = 0.0;
  double u1 = 0.0;
  std::function<double(double)> value;
  std::function<double(double)> slope;
  bool reversed = false;
  bool linear = false;

  Point2 at(double u) const {
    const double v = value(u);
    return axis == PieceAxis::kGraphOverX ? Point2{u, v} : Point2{v, u};
  }
  Point2 start() const { return at(reversed ? u1 : u0); }
  Point2 end() const { return at(reversed ? u0 : u1); }
};

/// Straight piece between two points, parametrized along the dominant axis.
inline CurvePiece linear_piece(Point2 a, Point2 b) {
  CurvePiece piece;
  piece.linear = true;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  if (std::fabs(dy) <= std::fabs(dx)) {
    piece.axis = PieceAxis::kGraphOverX;
    const Point2 lo = dx > 0 ? a : b;
    const Point2 hi = dx > 0 ? b : a;
    const double k = (hi.y - lo.y) / (hi.x - lo.x);
    piece.u0 = lo.x;
    piece.u1 = hi.x;
    piece.value = [lo, hi, k](double u) {
      if (u == hi.x) return hi.y;
      return lo.y + k * (u - lo.x);
    };
    piece.slope = [k](double) { return k; };
    piece.reversed = dx < 0;
  } else {
    piece.axis = PieceAxis::kGraphOverY;
    const Point2 lo = dy > 0 ? a : b;
    const Point2 hi = dy > 0 ? b : a;
    const double k = (hi.x - lo.x) / (hi.y - lo.y);
    piece.u0 = lo.y;
    piece.u1 = hi.y;
    piece.value = [lo, hi, k](double u) {
      if (u == hi.y) return hi.x;
      return lo.x + k * (u - lo.y);
    };
    piece.slope = [k](double) { return k; };
    piece.reversed = dy < 0;
  }
  return piece;
}

/// Image of a piece under (x, y) -> (sx x + tx, sy y + ty).
inline CurvePiece transform_piece(const CurvePiece& p, double sx, double tx, double sy, double ty) {
  CurvePiece out = p;
  const bool over_x = p.axis == PieceAxis::kGraphOverX;
  const double su = over_x ? sx : sy;
  const double tu = over_x ? tx : ty;
  const double sv = over_x ? sy : sx;
  const double tv = over_x ? ty : tx;
  const double a = su * p.u0 + tu;
  const double b = su * p.u1 + tu;
  out.u0 = std::min(a, b);
  out.u1 = std::max(a, b);
  auto value = p.value;
  auto slope = p.slope;
  out.value = [value, su, tu, sv, tv](double u) { return sv * value((u - tu) / su) + tv; };
  out.slope = [slope, su, tu, sv](double u) { return sv / su * slope((u - tu) / su); };
  if (su < 0) out.reversed = !p.reversed;
  if (p.linear) {
    // Rebuild from endpoints so evaluation stays exact at the ends.
    auto map = [&](Point2 q) { return Point2{sx * q.x + tx, sy * q.y + ty}; };
    Point2 s = map(p.start());
    Point2 e = map(p.end());
    out = linear_piece(s, e);
  }
  return out;
}

/// Image of a counterclockwise chain; a single reflection reverses the chain
/// so that the result is again counterclockwise.
inline std::vector<CurvePiece> transform_chain(const std::vector<CurvePiece>& chain, double sx,
                                               double tx, double sy, double ty) {
  std::vector<CurvePiece> out;
  out.reserve(chain.size());
  for (const auto& p : chain) out.push_back(transform_piece(p, sx, tx, sy, ty));
  if ((sx < 0) != (sy < 0)) {
    std::reverse(out.begin(), out.end());
    for (auto& p : out) {
      if (p.linear) {
        p = linear_piece(p.end(), p.start());
      } else {
        p.reversed = !p.reversed;
      }
    }
  }
  return out;
}

/// Direction classes of counterclockwise traversal, in cyclic order:
/// up, up-left, left, down-left, down, down-right, right, up-right.
inline int direction_class(double dx, double dy, double tol) {
  const int sx = dx > tol ? 1 : (dx < -tol ? -1 : 0);
  const int sy = dy > tol ? 1 : (dy < -tol ? -1 : 0);
  if (sx == 0 && sy > 0) return 0;
  if (sx < 0 && sy > 0) return 1;
  if (sx < 0 && sy == 0) return 2;
  if (sx < 0 && sy < 0) return 3;
  if (sx == 0 && sy < 0) return 4;
  if (sx > 0 && sy < 0) return 5;
  if (sx > 0 && sy == 0) return 6;
  if (sx > 0 && sy > 0) return 7;
  return -1;
}

/// NE covers classes 0-1, NW 2-3, SW 4-5, SE 6-7.
inline Quadrant class_quadrant(int cls) {
  static constexpr std::array<Quadrant, 8> kMap = {
      Quadrant::kNorthEast, Quadrant::kNorthEast, Quadrant::kNorthWest, Quadrant::kNorthWest,
      Quadrant::kSouthWest, Quadrant::kSouthWest, Quadrant::kSouthEast, Quadrant::kSouthEast};
  return kMap[static_cast<std::size_t>(cls)];
}

/// Unimodality of a closed chain of direction classes. Each piece gets a
/// quadrant label (axis-parallel pieces may take either neighbouring
/// quadrant); the chain is unimodal iff some labelling is cyclically
/// nondecreasing, i.e. wraps around exactly once. Returns the first piece
/// at which every labelling has already wrapped twice, or nullopt.
inline std::optional<std::size_t> quadrant_order_violation(const std::vector<int>& classes) {
  auto allowed = [](int cls, int q) {
    if (cls % 2 == 1) return q == (cls - 1) / 2;
    return q == cls / 2 || q == (cls / 2 + 3) % 4;
  };
  constexpr int kInf = 1 << 20;
  const std::size_t n = classes.size();
  std::optional<std::size_t> worst;
  for (int first = 0; first < 4; ++first) {
    if (!allowed(classes[0], first)) continue;
    // wraps[q]: fewest descents so far with the current piece labelled q.
    std::array<int, 4> wraps;
    wraps.fill(kInf);
    wraps[first] = 0;
    std::size_t i = 1;
    for (; i < n; ++i) {
      std::array<int, 4> next;
      next.fill(kInf);
      for (int q = 0; q < 4; ++q) {
        if (!allowed(classes[i], q)) continue;
        for (int p = 0; p < 4; ++p) {
          if (wraps[p] < kInf) next[q] = std::min(next[q], wraps[p] + (q < p ? 1 : 0));
        }
      }
      wraps = next;
      if (*std::min_element(wraps.begin(), wraps.end()) > 1) break;
    }
    if (i == n) {
      for (int q = 0; q < 4; ++q) {
        if (wraps[q] < kInf && wraps[q] + (first < q ? 1 : 0) == 1) return std::nullopt;
        // A chain that never wraps stays in one quadrant: no enclosed area.
      }
      worst = std::max(worst.value_or(0), n - 1);
    } else {
      worst = std::max(worst.value_or(0), i);
    }
  }
  return worst.value_or(0);
}

struct ValidationReport {
  bool ok = true;
  std::string message;
  std::string segment;  // NE/NW/SW/SE of the offending piece, when known
  std::optional<std::size_t> piece;
};

/// A validated closed unimodal curve together with its enclosed region.
class UnimodalCurve {
 public:
  /// Validates and wraps a counterclockwise chain of pieces. Throws
  /// Error(kInvalidInput) with the validation report on failure.
  static UnimodalCurve from_pieces(std::vector<CurvePiece> pieces, std::string id = "") {
    UnimodalCurve curve;
    curve.id_ = std::move(id);
    curve.pieces_ = std::move(pieces);
    const ValidationReport report = curve.check();
    if (!report.ok) {
      std::string what = "invalid curve: " + report.message;
      if (!report.segment.empty()) what += " (segment " + report.segment + ")";
      fail(ErrorKind::kInvalidInput, what);
    }
    curve.index_chains();
    return curve;
  }

  /// Closed polygon through the given vertices, either orientation.
  static UnimodalCurve polyline(std::vector<Point2> vertices, std::string id = "") {
    require(vertices.size() >= 3, ErrorKind::kInvalidInput, "polyline: need at least 3 vertices");
    if (vertices.front() == vertices.back()) vertices.pop_back();
    double twice_area = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const Point2& a = vertices[i];
      const Point2& b = vertices[(i + 1) % vertices.size()];
      twice_area += a.x * b.y - a.y * b.x;
    }
    if (twice_area < 0) std::reverse(vertices.begin(), vertices.end());
    std::vector<CurvePiece> pieces;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const Point2& a = vertices[i];
      const Point2& b = vertices[(i + 1) % vertices.size()];
      if (a == b) continue;
      pieces.push_back(linear_piece(a, b));
    }
    return from_pieces(std::move(pieces), std::move(id));
  }

  const std::vector<CurvePiece>& pieces() const { return pieces_; }
  const std::string& id() const { return id_; }
  UnimodalCurve renamed(std::string id) const {
    UnimodalCurve copy = *this;
    copy.id_ = std::move(id);
    return copy;
  }
  double area() const { return area_; }
  Point2 barycenter() const { return barycenter_; }
  double xmin() const { return xmin_; }
  double xmax() const { return xmax_; }
  double ymin() const { return ymin_; }
  double ymax() const { return ymax_; }
  /// Perimeter of the circumscribed rectangle, which equals the |dx| + |dy|
  /// length of the curve.
  double box_perimeter() const { return 2.0 * ((xmax_ - xmin_) + (ymax_ - ymin_)); }
  /// True when some piece is horizontal or vertical.
  bool has_axis_aligned_segments() const { return axis_aligned_; }
  bool all_linear() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const CurvePiece& p) { return p.linear; });
  }
  int piece_class(std::size_t i) const { return classes_[i]; }

  /// Upper boundary of the region at x; requires xmin <= x <= xmax.
  double upper(double x) const { return chain_value(upper_, x, true); }
  /// Lower boundary of the region at x; requires xmin <= x <= xmax.
  double lower(double x) const { return chain_value(lower_, x, false); }

  /// x coordinates where some piece starts or ends, sorted and unique.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// Image under (x, y) -> (sx x + tx, sy y + ty); sx, sy nonzero.
  UnimodalCurve transformed(double sx, double tx, double sy, double ty) const {
    return from_pieces(transform_chain(pieces_, sx, tx, sy, ty), id_);
  }

  UnimodalCurve translated(double dx, double dy) const { return transformed(1.0, dx, 1.0, dy); }
  UnimodalCurve scaled(double s) const { return transformed(s, 0.0, s, 0.0); }

  /// Area of the region between x0 and x1.
  double area_between(double x0, double x1) const {
    x0 = std::max(x0, xmin_);
    x1 = std::min(x1, xmax_);
    if (x1 <= x0) return 0.0;
    double total = 0.0;
    for_each_subinterval(x0, x1, {}, [&](double a, double b) {
      total += integrate([&](double x) { return upper(x) - lower(x); }, a, b, 1e-14, 2000).value;
    });
    return total;
  }

  /// Calls fn(a, b) for consecutive points of [x0, x1] split at the curve
  /// breakpoints and at the extra points given.
  template <class Fn>
  void for_each_subinterval(double x0, double x1, std::vector<double> extra, Fn&& fn) const {
    std::vector<double> cuts = {x0, x1};
    for (double b : breakpoints_) {
      if (b > x0 && b < x1) cuts.push_back(b);
    }
    for (double b : extra) {
      if (b > x0 && b < x1) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] > cuts[i]) fn(cuts[i], cuts[i + 1]);
    }
  }

  /// Points x in [xmin, xmax] where the upper or lower boundary equals v.
  std::vector<double> crossings(double v) const {
    std::vector<double> out;
    for (const auto* chain : {&upper_, &lower_}) {
      for (std::size_t idx : *chain) {
        const CurvePiece& p = pieces_[idx];
        const Point2 a = p.start();
        const Point2 b = p.end();
        const double ylo = std::min(a.y, b.y);
        const double yhi = std::max(a.y, b.y);
        if (v <= ylo || v >= yhi) continue;
        out.push_back(x_at_height(p, v));
      }
    }
    return out;
  }

  ValidationReport check() const {
    ValidationReport report;
    auto bad = [&](std::string msg, std::optional<std::size_t> piece) {
      report.ok = false;
      report.message = std::move(msg);
      report.piece = piece;
      if (piece && *piece < classes_.size() && classes_[*piece] >= 0) {
        report.segment = quadrant_name(class_quadrant(classes_[*piece]));
      }
      return report;
    };
    auto& self = const_cast<UnimodalCurve&>(*this);
    self.classes_.clear();
    if (pieces_.size() < 2) return bad("fewer than two pieces", std::nullopt);

    double scale = 0.0;
    for (const auto& p : pieces_) {
      const Point2 a = p.start();
      scale = std::max({scale, std::fabs(a.x), std::fabs(a.y)});
    }
    const double tol = 1e-9 * std::max(1.0, scale);

    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const CurvePiece& p = pieces_[i];
      if (!(p.u1 > p.u0)) return bad("degenerate piece", i);
      const Point2 a = p.start();
      const Point2 b = p.end();
      const int cls = direction_class(b.x - a.x, b.y - a.y, 1e-15 * std::max(1.0, scale));
      self.classes_.push_back(cls);
      if (cls < 0) return bad("zero-length piece", i);
      const Point2 next = pieces_[(i + 1) % pieces_.size()].start();
      if (std::fabs(next.x - b.x) > tol || std::fabs(next.y - b.y) > tol) {
        return bad("curve is not closed", i);
      }
      if (!p.linear) {
        // The value must move monotonically in the direction of its endpoints.
        const double dv = p.value(p.u1) - p.value(p.u0);
        for (int k = 0; k <= 32; ++k) {
          const double u = p.u0 + (p.u1 - p.u0) * k / 32.0;
          const double s = p.slope(u);
          if (!std::isfinite(s) || (dv > 0 && s < -1e-12) || (dv < 0 && s > 1e-12) ||
              (dv == 0 && std::fabs(s) > 1e-12)) {
            return bad("non-monotone segment", i);
          }
        }
      }
    }
    if (const auto at = quadrant_order_violation(classes_)) return bad("non-monotone segment", *at);

    self.axis_aligned_ = std::any_of(classes_.begin(), classes_.end(),
                                     [](int c) { return c % 2 == 0; });
    self.compute_moments();
    if (!(area_ > 0.0)) return bad("enclosed area is not positive", std::nullopt);
    return report;
  }

 private:
  UnimodalCurve() = default;

  static double x_at_height(const CurvePiece& p, double y) {
    if (p.axis == PieceAxis::kGraphOverY) return p.value(y);
    // Graph over x: invert the monotone value function.
    const double v0 = p.value(p.u0);
    const double v1 = p.value(p.u1);
    if (p.linear) return p.u0 + (y - v0) * (p.u1 - p.u0) / (v1 - v0);
    return bisect_monotone([&](double u) { return v1 > v0 ? p.value(u) : -p.value(u); },
                           v1 > v0 ? y : -y, p.u0, p.u1, 1e-15 * std::max(1.0, std::fabs(p.u1)));
  }

  static double y_at(const CurvePiece& p, double x) {
    if (p.axis == PieceAxis::kGraphOverX) return p.value(std::clamp(x, p.u0, p.u1));
    const double x0 = p.value(p.u0);
    const double x1 = p.value(p.u1);
    if (x0 == x1) return p.reversed ? p.u0 : p.u1;
    if (p.linear) return p.u0 + (x - x0) * (p.u1 - p.u0) / (x1 - x0);
    const double lo = std::min(x0, x1);
    const double hi = std::max(x0, x1);
    x = std::clamp(x, lo, hi);
    return bisect_monotone([&](double u) { return x1 > x0 ? p.value(u) : -p.value(u); },
                           x1 > x0 ? x : -x, p.u0, p.u1, 1e-15 * std::max(1.0, std::fabs(p.u1)));
  }

  double chain_value(const std::vector<std::size_t>& chain, double x, bool upper_chain) const {
    // Pieces of a chain are sorted by x; find the one covering x.
    auto it = std::lower_bound(chain.begin(), chain.end(), x, [&](std::size_t idx, double v) {
      const CurvePiece& p = pieces_[idx];
      return std::max(p.start().x, p.end().x) < v;
    });
    if (it == chain.end()) --it;
    const double y = y_at(pieces_[*it], x);
    (void)upper_chain;
    return y;
  }

  void index_chains() {
    upper_.clear();
    lower_.clear();
    std::vector<double> cuts;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const int cls = classes_[i];
      const Point2 a = pieces_[i].start();
      const Point2 b = pieces_[i].end();
      cuts.push_back(a.x);
      cuts.push_back(b.x);
      if (cls >= 1 && cls <= 3) upper_.push_back(i);
      if (cls >= 5 && cls <= 7) lower_.push_back(i);
    }
    auto by_x = [&](std::size_t i, std::size_t j) {
      return std::min(pieces_[i].start().x, pieces_[i].end().x) <
             std::min(pieces_[j].start().x, pieces_[j].end().x);
    };
    std::sort(upper_.begin(), upper_.end(), by_x);
    std::sort(lower_.begin(), lower_.end(), by_x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    breakpoints_ = std::move(cuts);
  }

  void compute_moments() {
    // Green's theorem: A = 1/2 \oint (x dy - y dx), centroid from
    // \oint x^2/2 dy and -\oint y^2/2 dx.
    double area = 0.0;
    double mx = 0.0;
    double my = 0.0;
    xmin_ = ymin_ = std::numeric_limits<double>::infinity();
    xmax_ = ymax_ = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) {
      const double dir = p.reversed ? -1.0 : 1.0;
      const bool over_x = p.axis == PieceAxis::kGraphOverX;
      auto area_f = [&](double u) {
        const double v = p.value(u);
        const double s = p.slope(u);
        return over_x ? 0.5 * (u * s - v) : 0.5 * (v - u * s);
      };
      auto mx_f = [&](double u) {
        const double v = p.value(u);
        return over_x ? 0.5 * u * u * p.slope(u) : 0.5 * v * v;
      };
      auto my_f = [&](double u) {
        const double v = p.value(u);
        return over_x ? -0.5 * v * v : -0.5 * u * u * p.slope(u);
      };
      area += dir * integrate(area_f, p.u0, p.u1, 1e-15, 2000).value;
      mx += dir * integrate(mx_f, p.u0, p.u1, 1e-15, 2000).value;
      my += dir * integrate(my_f, p.u0, p.u1, 1e-15, 2000).value;
      for (const Point2 q : {p.start(), p.end()}) {
        xmin_ = std::min(xmin_, q.x);
        xmax_ = std::max(xmax_, q.x);
        ymin_ = std::min(ymin_, q.y);
        ymax_ = std::max(ymax_, q.y);
      }
    }
    area_ = area;
    barycenter_ = area > 0 ? Point2{mx / area, my / area} : Point2{};
  }

  std::string id_;
  std::vector<CurvePiece> pieces_;
  std::vector<int> classes_;
  std::vector<std::size_t> upper_;
  std::vector<std::size_t> lower_;
  std::vector<double> breakpoints_;
  double area_ = 0.0;
  Point2 barycenter_;
  double xmin_ = 0, xmax_ = 0, ymin_ = 0, ymax_ = 0;
  bool axis_aligned_ = false;
};

/// Non-throwing validation of a raw piece chain.
inline ValidationReport validate_report(std::vector<CurvePiece> pieces) {
  try {
    (void)UnimodalCurve::from_pieces(std::move(pieces));
  } catch (const Error& e) {
    ValidationReport r;
    r.ok = false;
    r.message = e.what();
    const std::string what = e.what();
    for (const char* q : {"NE", "NW", "SW", "SE"}) {
      if (what.find(std::string("(segment ") + q + ")") != std::string::npos) r.segment = q;
    }
    return r;
  }
  return {};
}

/// Recentres the region at its barycenter and rescales it to target_area.
/// Length-like quantities (including the entropy integral) scale by
/// sqrt(target_area / old_area).
inline UnimodalCurve normalize(const UnimodalCurve& curve, double target_area) {
  require(target_area > 0, ErrorKind::kPrecondition, "normalize: target area must be positive");
  const double s = std::sqrt(target_area / curve.area());
  const Point2 c = curve.barycenter();
  return curve.transformed(s, -s * c.x, s, -s * c.y);
}

// ---------------------------------------------------------------------------
// Named families.

inline UnimodalCurve square_curve(double side, std::string id = "square") {
  require(side > 0, ErrorKind::kInvalidInput, "square: side must be positive");
  const double h = 0.5 * side;
  return UnimodalCurve::polyline({{-h, -h}, {h, -h}, {h, h}, {-h, h}}, std::move(id));
}

/// |x| + |y| = r with r chosen so the enclosed area is `area` (area = 2 r^2).
inline UnimodalCurve diamond_curve(double area, std::string id = "diamond") {
  require(area > 0, ErrorKind::kInvalidInput, "diamond: area must be positive");
  const double r = std::sqrt(area / 2.0);
  return UnimodalCurve::polyline({{r, 0}, {0, r}, {-r, 0}, {0, -r}}, std::move(id));
}

/// Axis-aligned ellipse with semi-axes a (x) and b (y), centred at origin.
inline UnimodalCurve ellipse_curve(double a, double b, std::string id = "ellipse") {
  require(a > 0 && b > 0, ErrorKind::kInvalidInput, "ellipse: semi-axes must be positive");
  // |dy/dx| = 1 at x = a^2 / sqrt(a^2 + b^2), y = b^2 / sqrt(a^2 + b^2).
  const double xs = a * a / std::sqrt(a * a + b * b);
  const double ys = b * b / std::sqrt(a * a + b * b);
  CurvePiece flat;  // y = b sqrt(1 - x^2/a^2), x in [0, xs]
  flat.axis = PieceAxis::kGraphOverX;
  flat.u0 = 0.0;
  flat.u1 = xs;
  flat.value = [a, b](double x) { return b * std::sqrt(std::max(0.0, 1.0 - x * x / (a * a))); };
  flat.slope = [a, b](double x) {
    return -b * x / (a * a * std::sqrt(std::max(1e-300, 1.0 - x * x / (a * a))));
  };
  flat.reversed = true;  // counterclockwise in the first quadrant: x decreases
  CurvePiece steep;      // x = a sqrt(1 - y^2/b^2), y in [0, ys]
  steep.axis = PieceAxis::kGraphOverY;
  steep.u0 = 0.0;
  steep.u1 = ys;
  steep.value = [a, b](double y) { return a * std::sqrt(std::max(0.0, 1.0 - y * y / (b * b))); };
  steep.slope = [a, b](double y) {
    return -a * y / (b * b * std::sqrt(std::max(1e-300, 1.0 - y * y / (b * b))));
  };
  steep.reversed = false;
  const std::vector<CurvePiece> quarter = {steep, flat};
  std::vector<CurvePiece> pieces;
  // Quadrants counterclockwise: (x,y), (-x,y), (-x,-y), (x,-y).
  const std::array<std::pair<double, double>, 4> signs = {{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  for (const auto& [sx, sy] : signs) {
    for (auto& p : transform_chain(quarter, sx, 0.0, sy, 0.0)) pieces.push_back(std::move(p));
  }
  return UnimodalCurve::from_pieces(std::move(pieces), std::move(id));
}

// ---------------------------------------------------------------------------
// Vershik's limit shape exp(-c x) + exp(-c y) = 1 with c = pi / sqrt(6).
// The region between the curve and the positive half-axes has area 1.

inline constexpr double kVershikRate = std::numbers::pi / 2.449489742783178098197284074705891;  // pi/sqrt(6)

/// Height of the unit-scale Vershik curve at x > 0.
inline double vershik_height(double x) { return -std::log(-std::expm1(-kVershikRate * x)) / kVershikRate; }

/// dy/dx of the unit-scale Vershik curve at x > 0.
inline double vershik_slope(double x) { return -1.0 / std::expm1(kVershikRate * x); }

/// The point where the unit-scale curve crosses the diagonal (slope -1).
inline double vershik_symmetric_point() { return std::numbers::ln2 / kVershikRate; }

/// Points of the Vershik curve scaled by `scale`, sorted by increasing x.
/// Parameters are spread evenly in p = exp(-c x / scale) over (0, 1).
inline std::vector<Point2> vershik_segment(double scale, int samples) {
  require(scale > 0, ErrorKind::kPrecondition, "vershik_segment: scale must be positive");
  require(samples >= 2, ErrorKind::kPrecondition, "vershik_segment: need at least two samples");
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int k = samples - 1; k >= 0; --k) {
    const double p = (k + 0.5) / samples;
    const double x = -std::log(p) / kVershikRate;
    const double y = -std::log1p(-p) / kVershikRate;
    out.push_back({scale * x, scale * y});
  }
  return out;
}

/// Truncation of the asymptotic tails: beyond c x = kVershikTail the area
/// and entropy left out are below 1e-15 relative.
inline constexpr double kVershikTail = 38.0;

/// Unit-scale Vershik arc in the first quadrant as two pieces
/// (counterclockwise: from the x-axis tail up to the y-axis tail).
inline std::vector<CurvePiece> vershik_arc_pieces() {
  const double xm = vershik_symmetric_point();
  const double xcut = kVershikTail / kVershikRate;
  CurvePiece flat;  // graph over x on [xm, xcut], |slope| <= 1
  flat.axis = PieceAxis::kGraphOverX;
  flat.u0 = xm;
  flat.u1 = xcut;
  flat.value = vershik_height;
  flat.slope = vershik_slope;
  flat.reversed = true;
  CurvePiece steep = flat;  // by symmetry x(y) has the same form
  steep.axis = PieceAxis::kGraphOverY;
  steep.reversed = false;
  return {flat, steep};
}

/// Joins consecutive pieces whose endpoints do not meet with straight
/// (in practice axis-aligned) connectors.
/// Gaps below 1e-12 of the curve's extent are rounding noise and are left
/// to the closure tolerance.
inline std::vector<CurvePiece> close_chain(std::vector<CurvePiece> pieces) {
  double extent = 1.0;
  for (const auto& p : pieces) {
    const Point2 a = p.start();
    extent = std::max({extent, std::fabs(a.x), std::fabs(a.y)});
  }
  std::vector<CurvePiece> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    out.push_back(pieces[i]);
    const Point2 a = pieces[i].end();
    const Point2 b = pieces[(i + 1) % pieces.size()].start();
    if (std::max(std::fabs(a.x - b.x), std::fabs(a.y - b.y)) > 1e-12 * extent) {
      out.push_back(linear_piece(a, b));
    }
  }
  return out;
}

/// Places a first-quadrant chain (counterclockwise, from the +x side to the
/// +y side) into all four quadrants, scaled per quadrant, and closes it.
inline UnimodalCurve four_quadrant_curve(const std::vector<CurvePiece>& first_quadrant,
                                         const std::array<double, 4>& scales, std::string id) {
  const std::array<std::pair<double, double>, 4> signs = {{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  std::vector<CurvePiece> pieces;
  for (int q = 0; q < 4; ++q) {
    const auto [sx, sy] = signs[q];
    auto chain = transform_chain(first_quadrant, sx * scales[q], 0.0, sy * scales[q], 0.0);
    for (auto& p : chain) pieces.push_back(std::move(p));
  }
  return UnimodalCurve::from_pieces(close_chain(std::move(pieces)), std::move(id));
}

/// Region bounded by one Vershik arc and the two half-axes, scaled to the
/// given area (a Young-diagram limit shape).
inline UnimodalCurve vershik_quadrant_region(double area, std::string id = "vershik-quadrant") {
  require(area > 0, ErrorKind::kInvalidInput, "vershik quadrant: area must be positive");
  const double s = std::sqrt(area);
  std::vector<CurvePiece> pieces;
  for (const auto& p : vershik_arc_pieces()) pieces.push_back(transform_piece(p, s, 0.0, s, 0.0));
  const Point2 top = pieces.back().end();
  const Point2 right = pieces.front().start();
  // The arc ends lie within rounding of the axes, so the axis edges run
  // straight from them to the corner.
  pieces.push_back(linear_piece(top, {0.0, 0.0}));
  pieces.push_back(linear_piece({0.0, 0.0}, right));
  return UnimodalCurve::from_pieces(std::move(pieces), std::move(id));
}

// ---------------------------------------------------------------------------
// Column slabs at grid scale 1/sqrt(n).

/// Square grid with cell side 1/sqrt(n). Column i covers
/// [(i + offset_x) h, (i + 1 + offset_x) h]; rows likewise.
struct GridPlacement {
  std::int64_t n = 1;
  double offset_x = 0.0;
  double offset_y = 0.0;

  double cell() const { return 1.0 / std::sqrt(static_cast<double>(n)); }
  double column_left(std::int64_t i) const { return (static_cast<double>(i) + offset_x) * cell(); }
  double row_bottom(std::int64_t j) const { return (static_cast<double>(j) + offset_y) * cell(); }
  /// Column whose slab contains x (right-open).
  std::int64_t column_of(double x) const {
    return static_cast<std::int64_t>(std::floor(x / cell() - offset_x));
  }
  std::int64_t row_of(double y) const {
    return static_cast<std::int64_t>(std::floor(y / cell() - offset_y));
  }
};

struct ColumnSlab {
  std::int64_t column = 0;
  double x0 = 0.0, x1 = 0.0;
  double cover0 = 0.0, cover1 = 0.0;  // part of [x0, x1] inside the region's x-range
  double lo = 0.0, hi = 0.0;          // interval of the region at the centre of the covered part
  double lo_min = 0.0, hi_max = 0.0;  // envelope over the slab
  double area = 0.0;                  // exact area of the region inside the slab
};

struct ColumnSlabProfile {
  GridPlacement grid;
  std::vector<ColumnSlab> columns;

  double exact_area() const {
    double total = 0.0;
    for (const auto& c : columns) total += c.area;
    return total;
  }
  /// Midpoint-rule area from the centre intervals.
  double midpoint_area() const {
    double total = 0.0;
    for (const auto& c : columns) total += (c.hi - c.lo) * (c.cover1 - c.cover0);
    return total;
  }
};

inline ColumnSlabProfile column_slabs(const UnimodalCurve& curve, const GridPlacement& grid) {
  ColumnSlabProfile profile{grid, {}};
  const std::int64_t first = grid.column_of(curve.xmin());
  std::int64_t last = grid.column_of(curve.xmax());
  if (grid.column_left(last) >= curve.xmax()) --last;
  for (std::int64_t i = first; i <= last; ++i) {
    ColumnSlab slab;
    slab.column = i;
    slab.x0 = grid.column_left(i);
    slab.x1 = grid.column_left(i + 1);
    const double a = std::max(slab.x0, curve.xmin());
    const double b = std::min(slab.x1, curve.xmax());
    if (b <= a) continue;
    slab.cover0 = a;
    slab.cover1 = b;
    const double mid = 0.5 * (a + b);
    slab.lo = curve.lower(mid);
    slab.hi = curve.upper(mid);
    slab.lo_min = std::min(curve.lower(a), curve.lower(b));
    slab.hi_max = std::max(curve.upper(a), curve.upper(b));
    for (double x : curve.breakpoints()) {
      if (x > a && x < b) {
        slab.lo_min = std::min(slab.lo_min, curve.lower(x));
        slab.hi_max = std::max(slab.hi_max, curve.upper(x));
      }
    }
    slab.area = curve.area_between(a, b);
    profile.columns.push_back(slab);
  }
  return profile;
}

/// Integral over [x0, x1] of the length of the symmetric difference between
/// the vertical interval [bottom, top] and the region's section at x.
inline double slab_symmetric_difference(const UnimodalCurve& curve, double x0, double x1,
                                        double bottom, double top) {
  const double width = x1 - x0;
  double result = (top - bottom) * width;
  const double a = std::max(x0, curve.xmin());
  const double b = std::min(x1, curve.xmax());
  if (b <= a) return result;
  std::vector<double> extra;
  for (double v : {top, bottom}) {
    for (double x : curve.crossings(v)) extra.push_back(x);
  }
  double region = 0.0;
  double overlap = 0.0;
  curve.for_each_subinterval(a, b, extra, [&](double s, double e) {
    auto section = [&](double x) { return curve.upper(x) - curve.lower(x); };
    auto common = [&](double x) {
      const double hi = std::min(curve.upper(x), top);
      const double lo = std::max(curve.lower(x), bottom);
      return std::max(0.0, hi - lo);
    };
    region += integrate(section, s, e, 1e-15, 2000).value;
    overlap += integrate(common, s, e, 1e-15, 2000).value;
  });
  return result + region - 2.0 * overlap;
}

}  // namespace polyldp
