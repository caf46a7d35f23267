#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyldp/harness.hpp"

namespace {

using namespace polyldp;

LatticePoint parse_point(const std::string& text) {
  std::stringstream in(text);
  std::int64_t x = 0;
  std::int64_t y = 0;
  char comma = 0;
  if (!(in >> x >> comma >> y) || comma != ',' || !in.eof()) {
    fail(ErrorKind::kConfig, "expected a point of the form x,y, got '" + text + "'");
  }
  return {static_cast<int>(x), static_cast<int>(y)};
}

void cmd_count_paths(const ExperimentConfig& config, const std::string& from, const std::string& to) {
  const BigCount c = count_monotone_paths(parse_point(from), parse_point(to));
  if (config.out_path.empty()) {
    std::cout << to_decimal(c) << '\n';
    return;
  }
  auto out = open_output(config.out_path);
  out << to_decimal(c) << '\n';
}

void add_constraint_flags(CLI::App* app, ExperimentConfig& config) {
  app->add_option("--area", config.area, "cell count A")->check(CLI::NonNegativeNumber);
  app->add_option("--perimeter", config.perimeter, "lattice perimeter L")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentConfig config;
  std::string convention;
  std::string from;
  std::string to;

  CLI::App app{"Convex polyomino counts, entropy functionals and tube-count convergence"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--workers", config.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--convention", convention, "counting convention")
      ->check(CLI::IsMember({"placed", "translation"}));
  app.add_flag("--nats", config.nats, "report logarithms in nats instead of bits");

  auto* enumerate = app.add_subcommand("enumerate", "exact count tables by area, perimeter and both");
  add_constraint_flags(enumerate, config);
  enumerate->add_option("--out", config.out_path, "CSV output")->required();

  auto* functional = app.add_subcommand("functional", "entropy integral, C_X and rate of a curve");
  functional->add_option("--curve", config.curve_path, "curve spec (JSON)")->required();
  add_constraint_flags(functional, config);
  functional->add_option("--out", config.out_path, "JSON output")->required();

  auto* limit = app.add_subcommand("limit-shape", "extremal curve for a constraint family");
  add_constraint_flags(limit, config);
  limit->add_option("--out", config.out_path, "JSON output")->required();

  auto* verify = app.add_subcommand("verify-ldp", "tube counts against the entropy integral");
  verify->add_option("--curve", config.curve_path, "curve spec (JSON)")->required();
  verify->add_option("--n", config.n_values, "ascending grid sizes")->required()->delimiter(',')
      ->check(CLI::PositiveNumber);
  verify->add_option("--eps", config.eps_values, "descending tube radii")->required()->delimiter(',')
      ->check(CLI::PositiveNumber);
  verify->add_option("--resolution", config.resolution, "cost units per epsilon")->check(CLI::PositiveNumber);
  verify->add_option("--out", config.out_path, "CSV output")->required();

  auto* sample = app.add_subcommand("sample", "exact uniform samples with a chi-square report");
  add_constraint_flags(sample, config);
  sample->add_option("--count", config.sample_count, "number of samples")->check(CLI::NonNegativeNumber);
  sample->add_option("--seed", config.seed, "random seed");
  sample->add_option("--out", config.out_path, "polyomino text output")->required();

  auto* paths = app.add_subcommand("count-paths", "monotone lattice paths between two points");
  paths->add_option("--from", from, "x,y")->required();
  paths->add_option("--to", to, "x,y")->required();
  paths->add_option("--out", config.out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  // Tables count up to translation; tube counts are placed. An explicit
  // mismatch is rejected by the driver.
  if (convention.empty()) convention = *enumerate || *sample ? "translation" : "placed";
  config.convention = convention == "placed" ? Convention::kPlaced : Convention::kTranslation;

  try {
    if (*enumerate) {
      config.command = "enumerate";
      cmd_enumerate(config);
    } else if (*functional) {
      config.command = "functional";
      cmd_functional(config);
    } else if (*limit) {
      config.command = "limit-shape";
      cmd_limit_shape(config);
    } else if (*verify) {
      config.command = "verify-ldp";
      cmd_verify_ldp(config);
    } else if (*sample) {
      config.command = "sample";
      cmd_sample(config);
    } else if (*paths) {
      config.command = "count-paths";
      cmd_count_paths(config, from, to);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "polyldp %s: %s\n", config.command.c_str(), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "polyldp %s: %s\n", config.command.c_str(), e.what());
    return 1;
  }
  return 0;
}
