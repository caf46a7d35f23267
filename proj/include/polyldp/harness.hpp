#pragma once

// Experiment drivers behind the polyldp command line: count tables,
// functional evaluation, limit shapes, the convergence study and sampling.
// Every driver is deterministic given its config.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include "polyldp/combinatorics.hpp"
#include "polyldp/curve_io.hpp"
#include "polyldp/enumeration.hpp"
#include "polyldp/entropy.hpp"
#include "polyldp/error.hpp"
#include "polyldp/functional.hpp"
#include "polyldp/limit_shape.hpp"

namespace polyldp {

enum class Convention { kPlaced, kTranslation };

struct ExperimentConfig {
  std::string command;
  std::string curve_path;
  std::vector<std::int64_t> n_values;
  std::vector<double> eps_values;
  std::optional<std::int64_t> area;
  std::optional<std::int64_t> perimeter;
  std::string out_path;
  std::uint64_t seed = 1;
  int workers = 1;
  Convention convention = Convention::kPlaced;
  bool nats = false;
  int resolution = 1024;
  int sample_count = 1000;
};

/// Exit codes of the command line.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kInvalidInput:
    case ErrorKind::kPrecondition: return 2;
    case ErrorKind::kInfeasible: return 3;
    case ErrorKind::kOverflow: return 4;
    case ErrorKind::kIo: return 5;
    case ErrorKind::kSolver: return 1;
  }
  return 1;
}

/// Bits, or nats when requested.
inline double report_log(double bits, bool nats) { return nats ? bits * std::numbers::ln2 : bits; }

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path);
  return out;
}

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---------------------------------------------------------------------------
// Chi-square uniformity.

struct ChiSquareReport {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

inline ChiSquareReport chi_square_uniform(const std::vector<std::int64_t>& observed) {
  require(observed.size() >= 2, ErrorKind::kPrecondition, "chi_square_uniform: need at least two classes");
  std::int64_t total = 0;
  for (auto o : observed) total += o;
  const double expected = static_cast<double>(total) / static_cast<double>(observed.size());
  ChiSquareReport r;
  for (auto o : observed) r.statistic += (o - expected) * (o - expected) / expected;
  r.degrees_of_freedom = static_cast<int>(observed.size()) - 1;
  boost::math::chi_squared dist(r.degrees_of_freedom);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

// ---------------------------------------------------------------------------
// enumerate

/// Count tables by area 1..A, by perimeter 4..L, and jointly when both
/// bounds are given. Rows inside the brute-force range carry the oracle.
inline CountTable enumerate_table(const ExperimentConfig& config) {
  constexpr int kOracleArea = 10;
  CountTable table;
  const std::int64_t max_area = config.area.value_or(0);
  const std::int64_t max_perimeter = config.perimeter.value_or(0);
  const bool want_area = config.area.has_value() && max_area >= 1;
  const bool want_perimeter = config.perimeter.has_value() && max_perimeter >= 4;

  // Oracle tallies over convex polyominoes of area <= kOracleArea.
  std::map<std::int64_t, BigCount> oracle_area;
  std::map<std::int64_t, BigCount> oracle_perimeter;
  std::map<std::pair<std::int64_t, std::int64_t>, BigCount> oracle_joint;
  if (want_area || want_perimeter) {
    table.with_oracle = true;
    for (const auto& e : brute_force_enumerate(kOracleArea)) {
      if (!e.convex) continue;
      oracle_area[e.polyomino.area()] += 1;
      oracle_perimeter[e.polyomino.perimeter()] += 1;
      oracle_joint[{e.polyomino.area(), e.polyomino.perimeter()}] += 1;
    }
  }
  // Every convex polyomino with perimeter L has area <= (L/4)^2.
  auto perimeter_in_oracle = [&](std::int64_t l) { return (l / 4.0) * (l / 4.0) <= kOracleArea; };

  if (want_area) {
    for (std::int64_t a = 1; a <= max_area; ++a) {
      CountRow row;
      row.kind = ConstraintKind::kArea;
      row.area = a;
      row.count = count_convex_by_area(a, config.workers);
      if (a <= kOracleArea) row.oracle = oracle_area[a];
      table.rows.push_back(row);
    }
  }
  if (want_perimeter) {
    for (std::int64_t l = 4; l <= max_perimeter; l += 2) {
      CountRow row;
      row.kind = ConstraintKind::kPerimeter;
      row.perimeter = l;
      row.count = count_convex_by_perimeter(l, config.workers);
      if (perimeter_in_oracle(l)) row.oracle = oracle_perimeter[l];
      table.rows.push_back(row);
    }
  }
  if (want_area && want_perimeter) {
    const auto joint = count_convex_table(static_cast<int>(max_area), static_cast<int>(max_perimeter), config.workers);
    for (const auto& [key, count] : joint) {
      CountRow row;
      row.kind = ConstraintKind::kAreaPerimeter;
      row.area = key.first;
      row.perimeter = key.second;
      row.count = count;
      if (key.first <= kOracleArea) row.oracle = oracle_joint[{key.first, key.second}];
      table.rows.push_back(row);
    }
  }
  return table;
}

inline void cmd_enumerate(const ExperimentConfig& config) {
  require(config.convention == Convention::kTranslation, ErrorKind::kConfig,
          "enumerate: count tables are up to translation; placed counts need a tube (verify-ldp)");
  const CountTable table = enumerate_table(config);
  if (config.out_path.empty()) fail(ErrorKind::kConfig, "enumerate: --out is required");
  auto out = open_output(config.out_path);
  write_count_csv(out, table);
}

// ---------------------------------------------------------------------------
// functional

inline ShapeConstraint family_for(const ExperimentConfig& config, const UnimodalCurve& curve) {
  ShapeConstraint family;
  if (config.area) family.area = static_cast<double>(*config.area);
  if (config.perimeter) family.perimeter = static_cast<double>(*config.perimeter);
  if (!family.area && !family.perimeter) {
    // Quadrature noise in the area would otherwise split the C_X cache key.
    family.area = std::stod(format_real(std::round(curve.area() * 1e9) / 1e9));
  }
  return family;
}

inline nlohmann::json functional_json(const UnimodalCurve& curve, const ShapeConstraint& family, bool nats) {
  const FunctionalResult r = rate(curve, family);
  nlohmann::json j;
  j["curve_id"] = curve.id();
  j["units"] = nats ? "nats" : "bits";
  j["area"] = curve.area();
  j["box_perimeter"] = curve.box_perimeter();
  j["entropy_integral"] = report_log(r.entropy_integral, nats);
  j["by_quadrant"] = {{"NE", report_log(r.by_quadrant[0], nats)},
                      {"NW", report_log(r.by_quadrant[1], nats)},
                      {"SW", report_log(r.by_quadrant[2], nats)},
                      {"SE", report_log(r.by_quadrant[3], nats)}};
  j["family"] = family.key();
  j["constant_C"] = report_log(r.constant_c, nats);
  j["constant_C_source"] = "limit-shape solver";
  j["rate"] = report_log(r.rate, nats);
  j["axis_aligned_segments"] = curve.has_axis_aligned_segments();
  return j;
}

inline void cmd_functional(const ExperimentConfig& config) {
  if (config.curve_path.empty()) fail(ErrorKind::kConfig, "functional: --curve is required");
  const UnimodalCurve curve = load_curve_spec(config.curve_path);
  const nlohmann::json j = functional_json(curve, family_for(config, curve), config.nats);
  if (config.out_path.empty()) fail(ErrorKind::kConfig, "functional: --out is required");
  auto out = open_output(config.out_path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// limit-shape

/// Points along the curve, counterclockwise, for plotting.
inline std::vector<Point2> sample_outline(const UnimodalCurve& curve, int per_piece) {
  std::vector<Point2> pts;
  for (const auto& p : curve.pieces()) {
    const int steps = p.linear ? 1 : per_piece;
    for (int i = 0; i < steps; ++i) {
      const double f = static_cast<double>(i) / steps;
      const double u = p.reversed ? p.u1 - f * (p.u1 - p.u0) : p.u0 + f * (p.u1 - p.u0);
      pts.push_back(p.at(u));
    }
  }
  return pts;
}

inline void cmd_limit_shape(const ExperimentConfig& config) {
  ShapeConstraint c;
  if (config.area) c.area = static_cast<double>(*config.area);
  if (config.perimeter) c.perimeter = static_cast<double>(*config.perimeter);
  if (!c.area && !c.perimeter) fail(ErrorKind::kConfig, "limit-shape: give --area and/or --perimeter");
  const LimitShape shape = build_limit_shape(c);
  nlohmann::json j;
  const auto& p = shape.params;
  j["family"] = p.family;
  j["units"] = config.nats ? "nats" : "bits";
  j["quadrant_scale"] = p.quadrant_scale;
  j["beta"] = std::isfinite(p.beta) ? nlohmann::json(p.beta) : nlohmann::json(p.beta > 0 ? "inf" : "-inf");
  j["width"] = p.width;
  j["height"] = p.height;
  if (p.target_area) j["target_area"] = *p.target_area;
  if (p.target_perimeter) j["target_perimeter"] = *p.target_perimeter;
  j["area_residual"] = p.area_residual;
  j["perimeter_residual"] = p.perimeter_residual;
  j["entropy_integral"] = report_log(p.integral, config.nats);
  nlohmann::json outline = nlohmann::json::array();
  for (const Point2& q : sample_outline(shape.curve, 64)) outline.push_back({q.x, q.y});
  j["outline"] = outline;
  if (config.out_path.empty()) fail(ErrorKind::kConfig, "limit-shape: --out is required");
  auto out = open_output(config.out_path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// verify-ldp

struct ConvergenceRow {
  std::int64_t n = 0;
  double epsilon = 0.0;
  std::int64_t target_area = 0;
  BigCount count_lower = 0;  // per-column costs rounded up
  BigCount count_upper = 0;  // per-column costs rounded down
  double log_per_sqrt_n = 0.0;
  double integral = 0.0;
  double gap = 0.0;
  /// (log Q_upper - log Q_lower) / log Q_upper.
  double bracket_rel_diff = 0.0;
  /// "first", "down" or "up" against the previous n at the same epsilon.
  std::string trend;
};

inline double log_count(const BigCount& c) { return log2_big(c); }

inline void finish_row(ConvergenceRow& row, bool nats) {
  const double lf = log_count(row.count_upper);
  const double lc = log_count(row.count_lower);
  row.log_per_sqrt_n = report_log(lf, nats) / std::sqrt(static_cast<double>(row.n));
  row.gap = std::fabs(row.log_per_sqrt_n - row.integral);
  row.bracket_rel_diff = lf > 0 && std::isfinite(lc) ? std::fabs(lf - lc) / lf
                         : (row.count_upper == row.count_lower ? 0.0 : 1.0);
}

inline std::vector<ConvergenceRow> verify_ldp(const UnimodalCurve& curve, const ExperimentConfig& config) {
  require(!config.n_values.empty() && !config.eps_values.empty(), ErrorKind::kConfig,
          "verify-ldp: --n and --eps lists are required");
  require(std::is_sorted(config.n_values.begin(), config.n_values.end()), ErrorKind::kConfig,
          "verify-ldp: n list must be ascending");
  require(std::is_sorted(config.eps_values.rbegin(), config.eps_values.rend()), ErrorKind::kConfig,
          "verify-ldp: epsilon list must be descending");
  require(config.convention == Convention::kPlaced, ErrorKind::kConfig,
          "verify-ldp: tube counts use the placed convention");
  const double integral = report_log(entropy_integral(curve).total, config.nats);
  std::vector<ConvergenceRow> rows;
  for (double eps : config.eps_values) {
    for (std::int64_t n : config.n_values) {
      ConvergenceRow row;
      row.n = n;
      row.epsilon = eps;
      row.integral = integral;
      // Cell count of the scaled region, rounded down.
      row.target_area = static_cast<std::int64_t>(std::floor(curve.area() * static_cast<double>(n) + 1e-9));
      rows.push_back(row);
    }
  }
  // Each (n, eps) cell is independent; every cell runs its own DP.
  parallel_for(rows.size() * 2, config.workers, [&](std::size_t job) {
    ConvergenceRow& row = rows[job / 2];
    TubeOptions options;
    options.resolution = config.resolution;
    options.floor_mode = job % 2 == 0;
    try {
      const BigCount c = count_in_tube(curve, row.epsilon, row.n, Constraint::by_area(row.target_area), options);
      (options.floor_mode ? row.count_upper : row.count_lower) = c;
    } catch (const Error& e) {
      std::ostringstream what;
      what << e.what() << " at n=" << row.n << ", eps=" << row.epsilon;
      throw Error(e.kind(), what.str());
    }
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    finish_row(rows[i], config.nats);
    if (i == 0 || rows[i - 1].epsilon != rows[i].epsilon) {
      rows[i].trend = "first";
    } else {
      rows[i].trend = rows[i].gap < rows[i - 1].gap ? "down" : "up";
    }
  }
  return rows;
}

inline std::string format_gap(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_real(v);
}

inline void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "n,epsilon,target_area,count_lower,count_upper,log_count_per_sqrt_n,integral,gap,bracket_rel_diff,trend\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_real(r.epsilon) << ',' << r.target_area << ',' << to_decimal(r.count_lower) << ','
        << to_decimal(r.count_upper) << ',' << format_gap(r.log_per_sqrt_n) << ',' << format_real(r.integral) << ','
        << format_gap(r.gap) << ',' << format_real(r.bracket_rel_diff) << ',' << r.trend << '\n';
  }
}

/// Reads a convergence table; derived columns are recomputed from the
/// counts, so a stale or edited gap column is replaced.
inline std::vector<ConvergenceRow> read_convergence_csv(std::istream& in, bool nats = false) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::kInvalidInput, "convergence CSV: empty input");
  std::vector<ConvergenceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) fail(ErrorKind::kInvalidInput, "convergence CSV: expected 10 columns");
    ConvergenceRow r;
    try {
      r.n = std::stoll(f[0]);
      r.epsilon = std::stod(f[1]);
      r.target_area = std::stoll(f[2]);
      r.count_lower = BigCount(f[3]);
      r.count_upper = BigCount(f[4]);
      r.integral = std::stod(f[6]);
    } catch (const std::exception&) {
      fail(ErrorKind::kInvalidInput, "convergence CSV: malformed row: " + line);
    }
    r.trend = f[9];
    finish_row(r, nats);
    rows.push_back(r);
  }
  return rows;
}

inline void cmd_verify_ldp(const ExperimentConfig& config) {
  if (config.curve_path.empty()) fail(ErrorKind::kConfig, "verify-ldp: --curve is required");
  const UnimodalCurve curve = load_curve_spec(config.curve_path);
  const auto rows = verify_ldp(curve, config);
  if (config.out_path.empty()) fail(ErrorKind::kConfig, "verify-ldp: --out is required");
  auto out = open_output(config.out_path);
  write_convergence_csv(out, rows);
}

// ---------------------------------------------------------------------------
// sample

struct SampleReport {
  std::vector<Polyomino> samples;
  /// Present when every class of the constraint is enumerable by brute force.
  std::optional<ChiSquareReport> chi_square;
  std::map<Polyomino, std::int64_t> frequencies;
};

inline Constraint constraint_from(const ExperimentConfig& config) {
  if (config.area && config.perimeter) return Constraint::by_both(*config.area, *config.perimeter);
  if (config.area) return Constraint::by_area(*config.area);
  if (config.perimeter) return Constraint::by_perimeter(*config.perimeter);
  fail(ErrorKind::kConfig, "a constraint (--area and/or --perimeter) is required");
}

inline SampleReport sample_with_report(const Constraint& constraint, int count, std::uint64_t seed) {
  constexpr int kOracleArea = 10;
  SampleReport report;
  report.samples = uniform_sample(constraint, count, seed);
  const bool enumerable = constraint.has_area()
                              ? constraint.area <= kOracleArea
                              : (constraint.perimeter / 4.0) * (constraint.perimeter / 4.0) <= kOracleArea;
  if (enumerable) {
    for (const auto& e : brute_force_enumerate(kOracleArea)) {
      if (e.convex && constraint.admits(e.polyomino)) report.frequencies[e.polyomino] = 0;
    }
  }
  for (const auto& p : report.samples) ++report.frequencies[p];
  if (enumerable && report.frequencies.size() >= 2) {
    std::vector<std::int64_t> observed;
    for (const auto& [p, k] : report.frequencies) observed.push_back(k);
    report.chi_square = chi_square_uniform(observed);
  }
  return report;
}

inline void cmd_sample(const ExperimentConfig& config) {
  const Constraint constraint = constraint_from(config);
  const SampleReport report = sample_with_report(constraint, config.sample_count, config.seed);
  if (config.out_path.empty()) fail(ErrorKind::kConfig, "sample: --out is required");
  {
    auto out = open_output(config.out_path);
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
      if (i > 0) out << '\n';
      write_polyomino(out, report.samples[i]);
    }
  }
  auto freq = open_output(config.out_path + ".freq.csv");
  freq << "class,cells,observed\n";
  std::size_t index = 0;
  for (const auto& [p, k] : report.frequencies) {
    freq << index++ << ',';
    for (std::size_t i = 0; i < p.cells().size(); ++i) {
      freq << (i ? " " : "") << p.cells()[i].x << ':' << p.cells()[i].y;
    }
    freq << ',' << k << '\n';
  }
  if (report.chi_square) {
    freq << "# chi_square=" << format_real(report.chi_square->statistic)
         << " dof=" << report.chi_square->degrees_of_freedom << " p=" << format_real(report.chi_square->p_value)
         << '\n';
  }
}

}  // namespace polyldp
