#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "polyldp/enumeration.hpp"
#include "polyldp/lattice.hpp"

using namespace polyldp;

namespace {

// Exposed unit edges, counted cell by cell.
std::int64_t exposed_edges(const std::set<std::pair<int, int>>& cells) {
  std::int64_t n = 0;
  for (auto [x, y] : cells) {
    for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) n += !cells.count({x + dx, y + dy});
  }
  return n;
}

// Every row and column meets the cell set in one run.
bool runs_contiguous(const std::set<std::pair<int, int>>& cells) {
  std::map<int, std::set<int>> rows, cols;
  for (auto [x, y] : cells) {
    rows[y].insert(x);
    cols[x].insert(y);
  }
  for (const auto* m : {&rows, &cols}) {
    for (const auto& [k, s] : *m) {
      if (*s.rbegin() - *s.begin() + 1 != static_cast<int>(s.size())) return false;
    }
  }
  return true;
}

std::set<std::pair<int, int>> as_set(const Polyomino& p) {
  std::set<std::pair<int, int>> s;
  for (const Cell& c : p.cells()) s.insert({c.x, c.y});
  return s;
}

}  // namespace

TEST_CASE("polyomino construction rejects bad input") {
  CHECK_THROWS_AS(Polyomino({}), Error);
  CHECK_THROWS_AS(Polyomino({{0, 0}, {0, 0}}), Error);
  CHECK_THROWS_AS(Polyomino({{0, 0}, {1, 1}}), Error);
  try {
    Polyomino({{0, 0}, {2, 0}});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidInput);
  }
}

TEST_CASE("area, perimeter and bounding box") {
  const Polyomino l({{0, 0}, {1, 0}, {0, 1}});
  CHECK(l.area() == 3);
  CHECK(l.perimeter() == 8);
  CHECK(l.bbox().width() == 2);
  CHECK(l.bbox().height() == 2);
  const Polyomino square({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  CHECK(square.perimeter() == 8);
  CHECK(square.translated(5, -3).canonical() == square);
}

TEST_CASE("brute force reproduces fixed polyomino counts") {
  const auto all = brute_force_enumerate(8);
  std::map<std::int64_t, int> by_area;
  for (const auto& e : all) ++by_area[e.polyomino.area()];
  const int expected[] = {1, 2, 6, 19, 63, 216, 760, 2725};
  for (int a = 1; a <= 8; ++a) CHECK(by_area[a] == expected[a - 1]);
}

TEST_CASE("perimeter matches exposed edge count over the brute-force universe") {
  for (const auto& e : brute_force_enumerate(8)) REQUIRE(e.polyomino.perimeter() == exposed_edges(as_set(e.polyomino)));
}

TEST_CASE("convexity is equivalent to a circumscribed-perimeter match") {
  for (const auto& e : brute_force_enumerate(8)) {
    const bool convex = runs_contiguous(as_set(e.polyomino));
    REQUIRE(is_convex(e.polyomino) == convex);
    REQUIRE(e.convex == convex);
    REQUIRE(circumscribed_perimeter_matches(e.polyomino) == convex);
  }
}

TEST_CASE("isoperimetric inequality for convex polyominoes") {
  for (const auto& e : brute_force_enumerate(10)) {
    if (!e.convex) continue;
    const auto check = isoperimetric_holds(e.polyomino);
    REQUIRE(check.holds);
    const auto& box = e.polyomino.bbox();
    const bool square = box.width() == box.height() && e.polyomino.area() == box.width() * box.height();
    REQUIRE(check.equality == square);
  }
}

TEST_CASE("extreme points and boundary decomposition") {
  const Polyomino p({{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}});
  const auto ext = extreme_points(p);
  CHECK(ext.east == Point2{2.5, 1.5});
  CHECK(ext.north == Point2{1.5, 2.5});
  CHECK(ext.west == Point2{0.5, 1.5});
  CHECK(ext.south == Point2{1.5, 0.5});
  for (const auto& e : brute_force_enumerate(7)) {
    if (!e.convex) continue;
    const auto parts = boundary_decomposition(e.polyomino);
    std::size_t steps = 0;
    for (const auto& b : parts) {
      REQUIRE(b.consistent());
      steps += b.steps.size();
    }
    REQUIRE(static_cast<std::int64_t>(steps) == e.polyomino.perimeter());
    CHECK(parts[0].orientation == Quadrant::kNorthEast);
    CHECK(parts[3].orientation == Quadrant::kSouthEast);
  }
  CHECK_THROWS_AS(boundary_decomposition(Polyomino({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {2, 1}})), Error);
}

TEST_CASE("text round trip") {
  const Polyomino a({{0, 0}, {1, 0}, {1, 1}});
  const Polyomino b({{5, 5}});
  std::stringstream s;
  write_polyomino(s, a);
  s << '\n';
  write_polyomino(s, b);
  const auto back = read_polyominoes(s);
  REQUIRE(back.size() == 2);
  CHECK(back[0] == a);
  CHECK(back[1] == b);
  std::stringstream bad("0 0\n0 x\n");
  CHECK_THROWS_AS(read_polyominoes(bad), Error);
  std::stringstream two("0 0\n\n1 1\n");
  CHECK_THROWS_AS(read_polyomino(two), Error);
}
