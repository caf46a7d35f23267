#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "polyldp/entropy.hpp"
#include "polyldp/functional.hpp"

using namespace polyldp;

TEST_CASE("axis-parallel boundaries carry no entropy") {
  CHECK(entropy_integral(square_curve(1.0)).total == 0.0);
  CHECK(entropy_integral(square_curve(3.0).translated(1, 2)).total == 0.0);
}

TEST_CASE("diamond entropy by edges and by quadrature") {
  const auto d = diamond_curve(1.0);
  const auto exact = entropy_integral(d);
  const auto quad = entropy_integral(d, IntegrationMode::kQuadrature);
  CHECK(exact.total == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::fabs(quad.total - exact.total) < 1e-12);
  for (double q : exact.by_quadrant) CHECK(q == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("polyline entropy equals the edge sum") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int i = 0; i < 30; ++i) {
    // Octagon-like convex polygon with one vertex per half-quadrant.
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const std::vector<Point2> v = {{1 + a, 0}, {1, 1 + b}, {0, 1 + b + c}, {-1 - d, 1}, {-1 - d, 0}, {-0.5, -1 - a}, {0.5, -1 - c}};
    const auto curve = UnimodalCurve::polyline(v);
    double oracle_sum = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const Point2 p = v[k], q = v[(k + 1) % v.size()];
      oracle_sum += oracle::edge_entropy(q.x - p.x, q.y - p.y);
    }
    const double exact = entropy_integral(curve).total;
    CHECK(exact == doctest::Approx(oracle_sum).epsilon(1e-13));
    CHECK(std::fabs(entropy_integral(curve, IntegrationMode::kQuadrature).total - exact) < 1e-12);
  }
}

TEST_CASE("Vershik quadrant arc of area one") {
  const auto region = vershik_quadrant_region(1.0);
  const double k = vershik_quadrant_constant();
  CHECK(k == doctest::Approx(std::numbers::pi * std::sqrt(2.0 / 3.0) / std::numbers::ln2).epsilon(1e-15));
  // The two axis edges carry no entropy; the arc carries all of it.
  CHECK(std::fabs(entropy_integral(region).total - k) < 1e-9);
}

TEST_CASE("Vershik constant against partition asymptotics") {
  // log p(m) = pi sqrt(2m/3) - log(4 sqrt(3) m) + O(1/sqrt(m)).
  const int m = 4000;
  const auto p = oracle::partitions(m);
  const double estimate = (oracle::log2_of(p[m]) + std::log2(4.0 * std::sqrt(3.0) * m)) / std::sqrt(double(m));
  CHECK(std::fabs(estimate - vershik_quadrant_constant()) < 1e-3);
  CHECK(p[10] == 42);
  CHECK(p[100] == oracle::Big("190569292"));
}

TEST_CASE("scaling law") {
  const std::vector<UnimodalCurve> curves = {diamond_curve(1.0), ellipse_curve(1.0, 0.3), vershik_quadrant_region(2.0)};
  for (const auto& c : curves) {
    const double base = entropy_integral(c).total;
    for (double s : {0.25, 2.0, 7.5}) {
      CHECK(std::fabs(entropy_integral(c.scaled(s)).total - s * base) < 1e-9 * std::max(1.0, s * base));
    }
  }
}

TEST_CASE("reflection and translation invariance") {
  const auto e = ellipse_curve(1.3, 0.45);
  const double base = entropy_integral(e).total;
  CHECK(std::fabs(entropy_integral(e.transformed(-1, 0, 1, 0)).total - base) < 1e-9);
  CHECK(std::fabs(entropy_integral(e.transformed(1, 0, -1, 0)).total - base) < 1e-9);
  CHECK(std::fabs(entropy_integral(e.translated(4, -2)).total - base) < 1e-9);
  // Swapping axes maps the ellipse (a, b) to (b, a).
  CHECK(std::fabs(entropy_integral(ellipse_curve(0.45, 1.3)).total - base) < 1e-9);
}

TEST_CASE("parametrization does not matter") {
  // A polyline with a collinear midpoint on every edge integrates the same.
  const double r = std::sqrt(0.5);
  const auto plain = diamond_curve(1.0);
  const auto split = UnimodalCurve::polyline({{r, 0}, {r / 2, r / 2}, {0, r}, {-r / 3, 2 * r / 3}, {-r, 0}, {0, -r}});
  CHECK(std::fabs(entropy_integral(split).total - entropy_integral(plain).total) < 1e-12);
}

TEST_CASE("entropy is bounded by the box perimeter") {
  for (const auto& c : {diamond_curve(1.0), ellipse_curve(1.0, 0.2), vershik_quadrant_region(1.0)}) {
    CHECK(entropy_integral(c).total <= c.box_perimeter() + 1e-12);
  }
}
