// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "oracles.hpp"
#include "polyldp/harness.hpp"

using namespace polyldp;

namespace {

// Tolerances and budgets.
constexpr double kPathsSeconds = 10.0;
constexpr double kBoundsSeconds = 5.0;
constexpr double kConvexitySeconds = 60.0;
constexpr double kIsoperimetricSeconds = 120.0;
constexpr double kDiamondTol = 1e-9;
constexpr double kVershikTarget = 3.70074;
constexpr double kVershikTol = 1e-4;
constexpr double kScalingTol = 1e-9;
constexpr double kRateFloor = -1e-6;
constexpr double kLimitRateTol = 1e-6;
constexpr int kCorpusSize = 200;
constexpr double kLdpEpsilon = 0.15;
constexpr double kLdpGapFraction = 0.25;
constexpr double kLdpBracketFraction = 0.05;
constexpr double kLdpSeconds = 30.0 * 60.0;
constexpr double kChiSquareMinP = 0.01;
constexpr int kSamplesPerClass = 1000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%s; %.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool rows_and_columns_contiguous(const Polyomino& p) {
  std::map<int, std::set<int>> rows, cols;
  for (const Cell& c : p.cells()) {
    rows[c.y].insert(c.x);
    cols[c.x].insert(c.y);
  }
  for (const auto* m : {&rows, &cols}) {
    for (const auto& [k, s] : *m) {
      if (*s.rbegin() - *s.begin() + 1 != static_cast<int>(s.size())) return false;
    }
  }
  return true;
}

Outcome paths() {
  const auto t = std::chrono::steady_clock::now();
  int mismatches = 0;
  for (int dx = 1; dx <= 6; ++dx) {
    for (int dy = 1; dy <= 6; ++dy) {
      const BigCount c = count_monotone_paths({0, 0}, {dx, dy});
      for (auto [sx, sy] : {std::pair{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}) {
        if (count_monotone_paths({0, 0}, {sx * dx, sy * dy}) != c) ++mismatches;
      }
      if (c != oracle::staircases(dx, dy)) ++mismatches;
    }
  }
  const double secs = elapsed_since(t);
  return {mismatches == 0 && secs < kPathsSeconds, std::to_string(mismatches) + " mismatches over 36 offsets x 4 signs"};
}

Outcome bounds() {
  const auto t = std::chrono::steady_clock::now();
  int bad = 0;
  for (std::uint64_t a = 2; a <= 200; ++a) {
    for (std::uint64_t b = 1; b < a; ++b) bad += !entropy_bounds_hold(a, b);
  }
  const double secs = elapsed_since(t);
  return {bad == 0 && secs < kBoundsSeconds, std::to_string(bad) + " violations over 19900 pairs"};
}

Outcome convexity() {
  const auto t = std::chrono::steady_clock::now();
  int checked = 0, bad = 0;
  for (const auto& e : brute_force_enumerate(8)) {
    const bool convex = rows_and_columns_contiguous(e.polyomino);
    bad += is_convex(e.polyomino) != convex;
    bad += circumscribed_perimeter_matches(e.polyomino) != convex;
    ++checked;
  }
  const double secs = elapsed_since(t);
  return {bad == 0 && checked == 3792 && secs < kConvexitySeconds,
          std::to_string(checked) + " polyominoes, " + std::to_string(bad) + " disagreements"};
}

Outcome isoperimetric() {
  const auto t = std::chrono::steady_clock::now();
  int convex = 0, bad = 0, equalities = 0;
  for (const auto& e : brute_force_enumerate(10)) {
    if (!e.convex) continue;
    ++convex;
    const auto& p = e.polyomino;
    const auto& box = p.bbox();
    const bool square = box.width() == box.height() && p.area() == box.width() * box.height();
    const auto check = isoperimetric_holds(p);
    const bool holds = 16 * p.area() <= p.perimeter() * p.perimeter();
    const bool equal = 16 * p.area() == p.perimeter() * p.perimeter();
    bad += !check.holds || !holds || check.equality != square || equal != square;
    equalities += equal;
  }
  const double secs = elapsed_since(t);
  return {bad == 0 && equalities == 3 && secs < kIsoperimetricSeconds,
          std::to_string(convex) + " convex polyominoes, equality at " + std::to_string(equalities) + " squares"};
}

Outcome enumerator() {
  std::map<std::int64_t, std::int64_t> by_area, by_perimeter;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> joint;
  for (const auto& e : brute_force_enumerate(10)) {
    if (!e.convex) continue;
    ++by_area[e.polyomino.area()];
    ++by_perimeter[e.polyomino.perimeter()];
    ++joint[{e.polyomino.area(), e.polyomino.perimeter()}];
  }
  int bad = 0;
  for (int a = 1; a <= 10; ++a) bad += count_convex_by_area(a) != by_area[a];
  // Perimeters beyond 12 reach areas past the brute-force universe; they are
  // checked against convex polyominoes enumerated box by box.
  for (int l = 4; l <= 16; l += 2) {
    std::int64_t expected = 0;
    if (l <= 12) {
      expected = by_perimeter[l];
    } else {
      for (int w = 1; w < l / 2; ++w) {
        const int h = l / 2 - w;
        for (int area = std::max(w, h); area <= w * h; ++area) {
          oracle::for_each_placed_convex(w, h, area, [&](int start, const std::vector<oracle::Run>& runs) {
            if (start != 0 || static_cast<int>(runs.size()) != w) return;
            int lo = h, hi = -1;
            for (const auto& r : runs) {
              lo = std::min(lo, r.b);
              hi = std::max(hi, r.t);
            }
            expected += lo == 0 && hi == h - 1;
          });
        }
      }
    }
    bad += count_convex_by_perimeter(l) != expected;
  }
  for (int a = 1; a <= 10; ++a) {
    for (int l = 4; l <= 2 * a + 2; l += 2) {
      const auto it = joint.find({a, l});
      bad += count_convex_by_area_perimeter(a, l).count != (it == joint.end() ? 0 : it->second);
    }
  }
  const bool literal = count_convex_by_area(1) == 1 && count_convex_by_area(2) == 2 && count_convex_by_area(3) == 6 &&
                       count_convex_by_area(4) == 19 && count_convex_by_perimeter(4) == 1 &&
                       count_convex_by_perimeter(6) == 2 && count_convex_by_perimeter(8) == 7;
  return {bad == 0 && literal, std::to_string(bad) + " mismatches; areas 1-4 -> 1,2,6,19; perimeters 4,6,8 -> 1,2,7"};
}

Outcome analytics() {
  const double square = entropy_integral(square_curve(1.0)).total;
  const double diamond = entropy_integral(diamond_curve(1.0)).total;
  const double vershik = entropy_integral(vershik_quadrant_region(1.0)).total;
  double worst_scaling = 0.0;
  for (const auto& c : {diamond_curve(1.0), ellipse_curve(0.8, 0.4), vershik_quadrant_region(1.0)}) {
    const double base = entropy_integral(c).total;
    for (double s : {0.5, 2.0, 3.0}) {
      worst_scaling = std::max(worst_scaling, std::fabs(entropy_integral(c.scaled(s)).total - s * base));
    }
  }
  const bool pass = square == 0.0 && std::fabs(diamond - 4.0 * std::sqrt(2.0)) < kDiamondTol &&
                    std::fabs(vershik - kVershikTarget) < kVershikTol && worst_scaling < kScalingTol;
  return {pass, "square " + fmt("%.1f", square) + ", diamond " + fmt("%.15f", diamond) + ", Vershik arc " +
                    fmt("%.10f", vershik) + ", scaling error " + fmt("%.1e", worst_scaling)};
}

Outcome rates() {
  std::mt19937_64 rng(2024);
  double lowest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kCorpusSize; ++i) {
    lowest = std::min(lowest, rate(corpus::random_curve(rng), ShapeConstraint::by_area(1.0)).rate);
  }
  const auto shape = build_limit_shape(ShapeConstraint::by_area(1.0));
  const double at_shape = rate(shape.curve, ShapeConstraint::by_area(1.0)).rate;
  return {lowest >= kRateFloor && std::fabs(at_shape) < kLimitRateTol,
          "lowest corpus rate " + fmt("%.6f", lowest) + ", rate at limit shape " + fmt("%.1e", at_shape)};
}

Outcome ldp() {
  const auto t = std::chrono::steady_clock::now();
  ExperimentConfig config;
  config.n_values = {16, 64, 144};
  config.eps_values = {kLdpEpsilon};
  config.workers = 2;
  const auto rows = verify_ldp(diamond_curve(1.0), config);
  const double target = 4.0 * std::sqrt(2.0);
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) decreasing = decreasing && rows[i].gap < rows[i - 1].gap;
  const auto& last = rows.back();
  const bool close = last.gap < kLdpGapFraction * target;
  bool brackets = true;
  for (const auto& r : rows) brackets = brackets && r.bracket_rel_diff < kLdpBracketFraction;
  const double secs = elapsed_since(t);
  std::ostringstream d;
  for (const auto& r : rows) {
    d << "n=" << r.n << " gap " << format_gap(r.gap) << " bracket " << fmt("%.4f", r.bracket_rel_diff) << "; ";
  }
  d << "gaps decreasing: " << (decreasing ? "yes" : "no") << "; gap at n=144 is " << fmt("%.1f", 100.0 * last.gap / target)
    << "% of target (limit " << fmt("%.0f", 100.0 * kLdpGapFraction) << "%)";
  return {decreasing && close && brackets && secs < kLdpSeconds, d.str()};
}

Outcome sampler() {
  std::ostringstream d;
  bool pass = true;
  for (int area : {3, 4}) {
    const int classes = area == 3 ? 6 : 19;
    const auto r = sample_with_report(Constraint::by_area(area), classes * kSamplesPerClass, 20240 + area);
    pass = pass && r.chi_square && r.frequencies.size() == static_cast<std::size_t>(classes) &&
           r.chi_square->p_value > kChiSquareMinP;
    d << "area " << area << ": " << r.frequencies.size() << " classes, p=" << fmt("%.3f", r.chi_square ? r.chi_square->p_value : 0.0)
      << (area == 3 ? "; " : "");
  }
  return {pass, d.str()};
}

Outcome determinism() {
  std::string first_table, first_tube, first_samples;
  bool same = true;
  for (int w : {1, 4, 8}) {
    ExperimentConfig table;
    table.area = 10;
    table.perimeter = 16;
    table.workers = w;
    table.convention = Convention::kTranslation;
    std::ostringstream a;
    write_count_csv(a, enumerate_table(table));

    ExperimentConfig tube;
    tube.n_values = {16, 36, 64};
    tube.eps_values = {0.3, 0.15};
    tube.workers = w;
    std::ostringstream b;
    write_convergence_csv(b, verify_ldp(diamond_curve(1.0), tube));

    TubeOptions o;
    o.workers = w;
    std::ostringstream c;
    c << to_decimal(count_in_tube(diamond_curve(1.0), 0.15, 100, Constraint::by_area(100), o));

    if (w == 1) {
      first_table = a.str();
      first_tube = b.str() + c.str();
    } else {
      same = same && a.str() == first_table && b.str() + c.str() == first_tube;
    }
  }
  return {same, "count tables, convergence rows and tube counts compared byte for byte"};
}

}  // namespace

int main() {
  report(1, "monotone path counts equal staircase enumeration", paths);
  report(2, "entropy bounds on binomials for 1 <= b < a <= 200", bounds);
  report(3, "convexity iff circumscribed perimeter, up to 8 cells", convexity);
  report(4, "A <= L^2/16 with equality exactly at squares, up to 10 cells", isoperimetric);
  report(5, "DP counts match brute force by area, perimeter and both", enumerator);
  report(6, "entropy integral analytics", analytics);
  report(7, "rate nonnegativity and zero at the limit shape", rates);
  report(8, "tube-count convergence trend for the area-1 diamond", ldp);
  report(9, "sampler uniformity by chi-square", sampler);
  report(10, "determinism across worker counts", determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
