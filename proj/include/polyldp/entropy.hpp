#pragma once

// The entropy integral  \int H(|y'| / (1 + |y'|)) (|dx| + |dy|)  of a
// unimodal curve, in bits. Per unit of the parameter u the integrand is
// L(-|slope|) for either parametrization, since the integrand is symmetric
// under swapping x and y.

#include <array>
#include <cmath>

#include "polyldp/combinatorics.hpp"
#include "polyldp/curves.hpp"
#include "polyldp/quadrature.hpp"

namespace polyldp {

enum class IntegrationMode {
  kAuto,        // straight pieces exactly, smooth pieces by quadrature
  kQuadrature,  // every piece by quadrature
};

struct EntropyBreakdown {
  double total = 0.0;
  /// Contributions of the NE, NW, SW, SE staircases.
  std::array<double, 4> by_quadrant{};
  double error_estimate = 0.0;
};

/// Absolute quadrature tolerance for a whole curve.
inline constexpr double kEntropyTolerance = 1e-9;

inline double piece_entropy(const CurvePiece& p, IntegrationMode mode, double tol, double& error) {
  if (p.linear && mode == IntegrationMode::kAuto) {
    const Point2 a = p.start();
    const Point2 b = p.end();
    return entropy_weight(b.x - a.x, b.y - a.y);
  }
  const auto r = integrate([&](double u) { return segment_integrand(-std::fabs(p.slope(u))); }, p.u0, p.u1,
                           tol, 4000);
  error += r.error;
  return r.value;
}

inline EntropyBreakdown entropy_integral(const UnimodalCurve& curve, IntegrationMode mode = IntegrationMode::kAuto) {
  EntropyBreakdown out;
  const auto& pieces = curve.pieces();
  const double tol = kEntropyTolerance / static_cast<double>(pieces.size()) * 0.1;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double v = piece_entropy(pieces[i], mode, tol, out.error_estimate);
    out.by_quadrant[static_cast<int>(class_quadrant(curve.piece_class(i)))] += v;
    out.total += v;
  }
  return out;
}

}  // namespace polyldp
