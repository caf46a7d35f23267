#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "corpus.hpp"
#include "polyldp/functional.hpp"
#include "polyldp/limit_shape.hpp"

using namespace polyldp;

TEST_CASE("area family: four Vershik arcs") {
  const auto shape = build_limit_shape(ShapeConstraint::by_area(1.0));
  CHECK(shape.curve.area() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(shape.params.integral == doctest::Approx(2.0 * vershik_quadrant_constant()).epsilon(1e-10));
  for (double s : shape.params.quadrant_scale) CHECK(s == doctest::Approx(0.5));
  // C_A scales like the square root of the area.
  CHECK(build_limit_shape(ShapeConstraint::by_area(4.0)).params.integral ==
        doctest::Approx(2.0 * shape.params.integral).epsilon(1e-10));
}

TEST_CASE("perimeter family: diamond") {
  const auto shape = build_limit_shape(ShapeConstraint::by_perimeter(8.0));
  CHECK(shape.curve.box_perimeter() == doctest::Approx(8.0));
  CHECK(shape.params.integral == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(shape.params.beta == 0.0);
}

TEST_CASE("area-perimeter family meets both constraints") {
  for (double fill : {0.05, 0.3, 0.5, 0.7, 0.9, 0.999}) {
    const double l = 4.0;
    const double a = fill * l * l / 16.0;
    const auto shape = build_limit_shape(ShapeConstraint::by_both(a, l));
    CHECK(shape.params.area_residual < kLimitShapeTolerance);
    CHECK(shape.params.perimeter_residual < kLimitShapeTolerance);
    CHECK(shape.params.integral <= l + 1e-12);
    CHECK(shape.params.integral > 0.0);
  }
  // fill and 1 - fill mirror each other in the arc parameter.
  const auto lo = build_limit_shape(ShapeConstraint::by_both(0.3, 4.0)).params;
  const auto hi = build_limit_shape(ShapeConstraint::by_both(0.7, 4.0)).params;
  CHECK(lo.beta == doctest::Approx(-hi.beta).epsilon(1e-8));
  CHECK(lo.integral == doctest::Approx(hi.integral).epsilon(1e-8));
  CHECK(build_limit_shape(ShapeConstraint::by_both(0.5, 4.0)).params.integral == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("square constraint and inadmissible input") {
  const auto sq = build_limit_shape(ShapeConstraint::by_both(1.0, 4.0));
  CHECK(sq.params.integral == 0.0);
  try {
    build_limit_shape(ShapeConstraint::by_both(2.0, 4.0));
    FAIL("accepted 16 A > L^2");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInfeasible);
  }
  CHECK_THROWS_AS(build_limit_shape(ShapeConstraint{}), Error);
}

TEST_CASE("box arc geometry") {
  for (double beta : {-30.0, -2.0, -1e-3, 1e-3, 2.0, 30.0}) {
    CHECK(box_arc_value(beta, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(box_arc_value(beta, 1.0)) < 1e-12);
    const double xm = box_arc_midpoint(beta);
    CHECK(box_arc_value(beta, xm) == doctest::Approx(xm).epsilon(1e-12));
    CHECK(box_arc_slope(beta, xm) == doctest::Approx(-1.0).epsilon(1e-10));
  }
  CHECK(box_arc_fill(2.0) < 0.5);
  CHECK(box_arc_fill(-2.0) > 0.5);
  CHECK(box_arc_fill(1e-4) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("rate is zero at the limit shape and nonnegative on a random corpus") {
  const auto shape = build_limit_shape(ShapeConstraint::by_area(1.0));
  CHECK(std::fabs(rate(shape.curve, ShapeConstraint::by_area(1.0)).rate) < 1e-6);
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const auto c = corpus::random_curve(rng);
    REQUIRE(rate(c, ShapeConstraint::by_area(1.0)).rate >= -1e-6);
  }
}

TEST_CASE("limit shape is locally optimal") {
  // Perturb the x and y scale of each quadrant's arc by up to 1%, cut the
  // axis tails of neighbouring arcs to a common length, renormalize the
  // area; the integral may not increase.
  const auto base = build_limit_shape(ShapeConstraint::by_area(1.0));
  const std::array<std::pair<double, double>, 4> signs = {{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  const std::array<int, 4> x_neighbour = {3, 2, 1, 0};  // shares the horizontal half-axis
  const std::array<int, 4> y_neighbour = {1, 0, 3, 2};  // shares the vertical half-axis
  const double tail = kVershikTail / kVershikRate;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  for (int i = 0; i < 50; ++i) {
    std::array<double, 4> sx{}, sy{};
    for (int q = 0; q < 4; ++q) {
      sx[q] = 0.5 * (1.0 + u(rng));
      sy[q] = 0.5 * (1.0 + u(rng));
    }
    std::vector<CurvePiece> pieces;
    for (int q = 0; q < 4; ++q) {
      auto arc = vershik_arc_pieces();
      arc[0].u1 = tail * std::min(sx[q], sx[x_neighbour[q]]) / sx[q];
      arc[1].u1 = tail * std::min(sy[q], sy[y_neighbour[q]]) / sy[q];
      for (auto& p : transform_chain(arc, signs[q].first * sx[q], 0.0, signs[q].second * sy[q], 0.0)) {
        pieces.push_back(std::move(p));
      }
    }
    const auto c = normalize(UnimodalCurve::from_pieces(close_chain(std::move(pieces)), "perturbed"), 1.0);
    REQUIRE(entropy_integral(c).total <= base.params.integral + 1e-9);
  }
  // The diamond is beaten by the composite at equal area.
  CHECK(rate(diamond_curve(1.0), ShapeConstraint::by_area(1.0)).rate == doctest::Approx(1.7444588692).epsilon(1e-9));
}

TEST_CASE("rate checks the constraint") {
  CHECK_THROWS_AS(rate(diamond_curve(2.0), ShapeConstraint::by_area(1.0)), Error);
  CHECK_THROWS_AS(rate(diamond_curve(1.0), ShapeConstraint::by_perimeter(4.0)), Error);
  const auto r = rate(diamond_curve(2.0), ShapeConstraint::by_perimeter(8.0));
  CHECK(std::fabs(r.rate) < 1e-12);
}

TEST_CASE("C_X cache returns one value across threads") {
  clear_constant_cache();
  const auto family = ShapeConstraint::by_both(0.37, 3.0);
  std::vector<double> seen(8);
  std::vector<std::thread> pool;
  for (int i = 0; i < 8; ++i) pool.emplace_back([&, i] { seen[i] = constant_C(family); });
  for (auto& t : pool) t.join();
  for (double v : seen) CHECK(v == seen[0]);
  CHECK(seen[0] == build_limit_shape(family).params.integral);
}
