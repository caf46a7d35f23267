#include <doctest.h>

#include <sstream>

#include "polyldp/harness.hpp"

using namespace polyldp;

namespace {

std::string table_csv(const ExperimentConfig& c) {
  std::ostringstream out;
  write_count_csv(out, enumerate_table(c));
  return out.str();
}

ExperimentConfig table_config(std::optional<std::int64_t> area, std::optional<std::int64_t> perimeter) {
  ExperimentConfig c;
  c.area = area;
  c.perimeter = perimeter;
  c.convention = Convention::kTranslation;
  return c;
}

}  // namespace

TEST_CASE("enumerate rows and oracle column") {
  const std::string csv = table_csv(table_config(6, 8));
  CHECK(csv.rfind("n,constraint_kind,A,L,epsilon,curve_id,count_decimal,oracle\n", 0) == 0);
  for (const char* row : {"1,area,1,,,,1,1\n", "1,area,2,,,,2,2\n", "1,area,3,,,,6,6\n", "1,area,4,,,,19,19\n",
                          "1,area,5,,,,59,59\n", "1,area,6,,,,176,176\n", "1,perimeter,,4,,,1,1\n",
                          "1,perimeter,,6,,,2,2\n", "1,perimeter,,8,,,7,7\n", "1,area-perimeter,4,8,,,1,1\n"}) {
    CHECK(csv.find(row) != std::string::npos);
  }
}

TEST_CASE("enumerate outside the oracle range leaves the oracle cell empty") {
  const std::string csv = table_csv(table_config(11, std::nullopt));
  CHECK(csv.find("1,area,11,,,,23320,\n") != std::string::npos);
}

TEST_CASE("empty range writes the header only") {
  CHECK(table_csv(table_config(0, std::nullopt)) == "n,constraint_kind,A,L,epsilon,curve_id,count_decimal\n");
  CHECK(table_csv(table_config(std::nullopt, 2)) == "n,constraint_kind,A,L,epsilon,curve_id,count_decimal\n");
}

TEST_CASE("enumerate output is identical across worker counts") {
  auto c = table_config(9, 14);
  c.workers = 1;
  const std::string one = table_csv(c);
  for (int w : {4, 8}) {
    c.workers = w;
    CHECK(table_csv(c) == one);
  }
}

TEST_CASE("functional JSON") {
  auto sq = functional_json(square_curve(1.0), ShapeConstraint::by_area(1.0), false);
  CHECK(sq["entropy_integral"].get<double>() == 0.0);
  auto d = functional_json(diamond_curve(1.0), ShapeConstraint::by_area(1.0), false);
  CHECK(d["entropy_integral"].get<double>() == doctest::Approx(5.656854249492381).epsilon(1e-12));
  CHECK(d["constant_C_source"] == "limit-shape solver");
  const auto shape = build_limit_shape(ShapeConstraint::by_area(1.0));
  auto v = functional_json(shape.curve, ShapeConstraint::by_area(1.0), false);
  CHECK(std::fabs(v["rate"].get<double>()) < 1e-6);
  auto nats = functional_json(diamond_curve(1.0), ShapeConstraint::by_area(1.0), true);
  CHECK(nats["entropy_integral"].get<double>() == doctest::Approx(5.656854249492381 * std::numbers::ln2));
}

TEST_CASE("convergence rows") {
  ExperimentConfig c;
  c.n_values = {4, 9, 16};
  c.eps_values = {1e-3};
  const auto sq = square_curve(1.0);
  const auto rows = verify_ldp(sq.translated(0.5, 0.5), c);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.count_lower == 1);
    CHECK(r.count_upper == 1);
    CHECK(r.log_per_sqrt_n == 0.0);
    CHECK(r.gap == 0.0);
  }
  CHECK(rows[0].trend == "first");

  std::ostringstream out;
  write_convergence_csv(out, rows);
  std::istringstream in(out.str());
  const auto back = read_convergence_csv(in);
  REQUIRE(back.size() == 3);
  CHECK(back[2].n == 16);

  // Derived columns are recomputed on read.
  std::istringstream edited(
      "n,epsilon,target_area,count_lower,count_upper,log_count_per_sqrt_n,integral,gap,bracket_rel_diff,trend\n"
      "64,0.15,64,15254,15254,99,5.656854249492381,99,0,first\n");
  const auto fixed = read_convergence_csv(edited);
  CHECK(fixed[0].gap == doctest::Approx(5.656854249492381 - std::log2(15254.0) / 8.0).epsilon(1e-12));
  std::istringstream bad("header\n1,2,3\n");
  CHECK_THROWS_AS(read_convergence_csv(bad), Error);
}

TEST_CASE("verify-ldp configuration checks") {
  ExperimentConfig c;
  c.n_values = {16, 9};
  c.eps_values = {0.2};
  CHECK_THROWS_AS(verify_ldp(diamond_curve(1.0), c), Error);
  c.n_values = {9, 16};
  c.eps_values = {0.1, 0.2};
  CHECK_THROWS_AS(verify_ldp(diamond_curve(1.0), c), Error);
  c.eps_values = {0.2};
  c.convention = Convention::kTranslation;
  CHECK_THROWS_AS(verify_ldp(diamond_curve(1.0), c), Error);
}

TEST_CASE("verify-ldp is identical across worker counts") {
  ExperimentConfig c;
  c.n_values = {16, 36, 64};
  c.eps_values = {0.3, 0.15};
  std::string first;
  for (int w : {1, 4, 8}) {
    c.workers = w;
    std::ostringstream out;
    write_convergence_csv(out, verify_ldp(diamond_curve(1.0), c));
    if (first.empty()) first = out.str();
    CHECK(out.str() == first);
  }
}

TEST_CASE("chi-square report") {
  const auto r = chi_square_uniform({104, 104, 96, 100, 92, 104});
  CHECK(r.statistic == doctest::Approx(1.28));
  CHECK(r.degrees_of_freedom == 5);
  CHECK(r.p_value == doctest::Approx(0.93697614).epsilon(1e-6));
  const auto report = sample_with_report(Constraint::by_area(3), 600, 7);
  REQUIRE(report.chi_square.has_value());
  CHECK(report.frequencies.size() == 6);
  CHECK(report.chi_square->p_value > 0.01);
  CHECK_FALSE(sample_with_report(Constraint::by_area(11), 5, 7).chi_square.has_value());
}

TEST_CASE("exit codes are distinct per failure class") {
  CHECK(exit_code(ErrorKind::kConfig) == 2);
  CHECK(exit_code(ErrorKind::kInfeasible) == 3);
  CHECK(exit_code(ErrorKind::kOverflow) == 4);
  CHECK(exit_code(ErrorKind::kIo) == 5);
}
