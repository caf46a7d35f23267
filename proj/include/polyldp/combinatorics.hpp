#pragma once

// Exact counting primitives and the entropy functions used throughout.
// All logarithms are base 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "polyldp/error.hpp"

namespace polyldp {

using BigCount = boost::multiprecision::cpp_int;

struct LatticePoint {
  int x = 0;
  int y = 0;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

inline std::string to_decimal(const BigCount& value) { return value.str(); }

/// log2 of a positive big integer, accurate to double precision.
/// Returns -inf for zero.
inline double log2_big(const BigCount& value) {
  require(value >= 0, ErrorKind::kPrecondition, "log2_big: negative value");
  if (value == 0) return -std::numeric_limits<double>::infinity();
  const auto msb = static_cast<long>(boost::multiprecision::msb(value));
  if (msb < 63) return std::log2(static_cast<double>(value.convert_to<std::uint64_t>()));
  const long shift = msb - 62;
  const BigCount top = value >> shift;
  return std::log2(static_cast<double>(top.convert_to<std::uint64_t>())) + static_cast<double>(shift);
}

/// Exact C(a, b); zero when b > a.
inline BigCount binomial(std::uint64_t a, std::uint64_t b) {
  if (b > a) return 0;
  b = std::min(b, a - b);
  BigCount result = 1;
  // Each prefix product is itself C(a - b + i, i), so the division is exact.
  for (std::uint64_t i = 1; i <= b; ++i) {
    result *= (a - b + i);
    result /= i;
  }
  return result;
}

/// Number of monotone staircases between two lattice points that are
/// right-continuous at the first one: C(|dx| + |dy| - 1, |dy|).
inline BigCount count_monotone_paths(LatticePoint from, LatticePoint to) {
  const long dx = std::labs(static_cast<long>(to.x) - from.x);
  const long dy = std::labs(static_cast<long>(to.y) - from.y);
  require(dx != 0 && dy != 0, ErrorKind::kPrecondition,
          "count_monotone_paths: endpoints must differ in both coordinates");
  return binomial(static_cast<std::uint64_t>(dx + dy - 1), static_cast<std::uint64_t>(dy));
}

/// Binary entropy in bits, with 0 log 0 = 0.
inline double binary_entropy(double u) {
  require(u >= 0.0 && u <= 1.0, ErrorKind::kPrecondition,
          "binary_entropy: argument outside [0, 1]");
  if (u == 0.0 || u == 1.0) return 0.0;
  return -(u * std::log2(u) + (1.0 - u) * std::log2(1.0 - u));
}

/// (|dx| + |dy|) H(|dy| / (|dx| + |dy|)), the entropy carried by a straight
/// lattice-direction-agnostic step. Symmetric in its arguments and
/// homogeneous of degree one.
inline double entropy_weight(double dx, double dy) {
  dx = std::fabs(dx);
  dy = std::fabs(dy);
  const double total = dx + dy;
  if (total == 0.0) return 0.0;
  double result = 0.0;
  if (dx > 0.0) result += dx * std::log2(total / dx);
  if (dy > 0.0) result += dy * std::log2(total / dy);
  return result;
}

/// L(z) = (1 - z) H(-z / (1 - z)) for z <= 0: entropy per unit of x of a
/// monotone staircase with slope z.
inline double segment_integrand(double z) {
  require(z <= 0.0, ErrorKind::kPrecondition, "segment_integrand: slope must be <= 0");
  const double w = -z;
  if (w == 0.0) return 0.0;
  // w log2((1 + w) / w) + log2(1 + w), written to stay accurate for large w.
  return (w * std::log1p(1.0 / w) + std::log1p(w)) / std::numbers::ln2;
}

/// Checks a H(b/a) - log2 sqrt(8 pi b (1 - b/a)) <= log2 C(a, b) <= a H(b/a).
inline bool entropy_bounds_hold(std::uint64_t a, std::uint64_t b) {
  require(a > b && b >= 1, ErrorKind::kPrecondition, "entropy_bounds_hold: need a > b >= 1");
  const double ad = static_cast<double>(a);
  const double bd = static_cast<double>(b);
  const double upper = ad * binary_entropy(bd / ad);
  const double lower = upper - 0.5 * std::log2(8.0 * std::numbers::pi * bd * (1.0 - bd / ad));
  const double exact = log2_big(binomial(a, b));
  return lower <= exact && exact <= upper;
}

}  // namespace polyldp
