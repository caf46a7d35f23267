#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature with a hard cap on the
// number of subintervals. Running into the cap is an error, never a silent
// loss of accuracy.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "polyldp/error.hpp"

namespace polyldp {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

struct GkInterval {
  double a, b, value, error, magnitude;  // magnitude: Kronrod estimate of the integral of |f|
  bool operator<(const GkInterval& other) const { return error < other.error; }
};

template <class F>
GkInterval gauss_kronrod15(const F& f, double a, double b) {
  static constexpr std::array<double, 8> kNodes = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> kKronrod = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> kGauss = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  double magnitude = std::fabs(fc) * kKronrod[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double fl = f(center - dx);
    const double fr = f(center + dx);
    kronrod += kKronrod[i] * (fl + fr);
    magnitude += kKronrod[i] * (std::fabs(fl) + std::fabs(fr));
    if (i % 2 == 1) gauss += kGauss[i / 2] * (fl + fr);
  }
  kronrod *= half;
  gauss *= half;
  magnitude *= std::fabs(half);
  return {a, b, kronrod, std::fabs(kronrod - gauss), magnitude};
}

}  // namespace detail

/// Integrates f over [a, b] until the summed error estimate drops below
/// abs_tol, or below the roundoff floor 50 eps \int |f| when that is larger.
/// Throws Error(kSolver) when max_intervals would be exceeded.
template <class F>
QuadratureResult integrate(const F& f, double a, double b, double abs_tol = 1e-11,
                           int max_intervals = 4000) {
  QuadratureResult out;
  if (a == b) return out;
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  std::priority_queue<detail::GkInterval> pending;
  auto first = detail::gauss_kronrod15(f, a, b);
  double total = first.value;
  double total_error = first.error;
  double total_magnitude = first.magnitude;
  constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();
  pending.push(first);
  int count = 1;
  while (total_error > std::max(abs_tol, kRoundoff * total_magnitude)) {
    if (count >= max_intervals) {
      fail(ErrorKind::kSolver, "quadrature: subdivision cap reached (error estimate " +
                                   std::to_string(total_error) + ")");
    }
    const auto worst = pending.top();
    pending.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval cannot be split further in double precision.
      fail(ErrorKind::kSolver, "quadrature: interval underflow");
    }
    const auto left = detail::gauss_kronrod15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_magnitude += left.magnitude + right.magnitude - worst.magnitude;
    pending.push(left);
    pending.push(right);
    ++count;
  }
  // Re-sum from the leaves so cancellation in the running total does not leak.
  double sum = 0.0;
  double err = 0.0;
  while (!pending.empty()) {
    sum += pending.top().value;
    err += pending.top().error;
    pending.pop();
  }
  out.value = sign * sum;
  out.error = err;
  out.intervals = count;
  return out;
}

/// Bracketed bisection for a monotone function on [lo, hi]. Returns x with
/// f(x) = target to within the bracket width tol (absolute).
template <class F>
double bisect_monotone(const F& f, double target, double lo, double hi, double tol = 1e-13) {
  double flo = f(lo) - target;
  const double fhi = f(hi) - target;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  require((flo < 0.0) != (fhi < 0.0), ErrorKind::kSolver, "bisect_monotone: target not bracketed");
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid) - target;
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace polyldp
