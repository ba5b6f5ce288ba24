// Batch front door: problem JSON in, machine-readable results out.
//
//   rbsde solve      --config problem.json --out results/
//   rbsde check      --config problem.json
//   rbsde compare    --config problem.json --out results/
//   rbsde sweep-beta --config problem.json --betas 8,12,20,40 --out results/
//
// Exit codes: 0 success/converged, 1 validation or comparison failure
// (including malformed JSON), 2 non-convergence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rbsde/estimates.hpp"
#include "rbsde/oracle.hpp"
#include "rbsde/picard.hpp"
#include "rbsde/problem_io.hpp"
#include "rbsde/snell.hpp"
#include "rbsde/validate.hpp"

namespace {

using nlohmann::json;

struct CliOptions {
  std::string config;
  std::string out_dir = ".";
  std::optional<double> beta;
  std::optional<int> steps;
  double tol = 1e-12;
  int max_iters = 60;
  std::uint64_t seed = 424242;
  std::size_t paths = 10000;
  std::vector<double> betas{8.0, 12.0, 20.0, 40.0};
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// JSON value for a double; non-finite values become strings so nothing is
/// silently dropped as null.
json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json to_json(const rbsde::NormEstimate& est) {
  return {{"value", json_number(est.value)},
          {"std_error", json_number(est.std_error)},
          {"exact", est.exact}};
}

json to_json(const rbsde::CheckEntry& entry) {
  json node = nullptr;
  if (entry.node_i >= 0) node = {entry.node_i, entry.node_j};
  return {{"name", entry.name},       {"passed", entry.passed},
          {"blocking", entry.blocking}, {"magnitude", json_number(entry.magnitude)},
          {"node", node},             {"detail", entry.detail}};
}

json to_json(const rbsde::AssumptionReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) entries.push_back(to_json(e));
  return {{"ok", report.ok()},
          {"entries", entries},
          {"xi_norm", to_json(report.xi_norm)},
          {"f0_norm", to_json(report.f0_norm)},
          {"obstacle_norm", to_json(report.obstacle_norm)}};
}

json to_json(const rbsde::EstimateReport& report) {
  return {{"lhs", json_number(report.lhs)},
          {"rhs", json_number(report.rhs)},
          {"ratio", json_number(report.ratio)},
          {"beta_low_warning", report.beta_low_warning},
          {"terms",
           {{"y_running_sup", to_json(report.y_running_sup)},
            {"z_h2", to_json(report.z_h2)},
            {"ya_h2", to_json(report.ya_h2)},
            {"k_terminal_sq", to_json(report.k_terminal_sq)},
            {"xi_l2", to_json(report.xi_l2)},
            {"f0_h2", to_json(report.f0_h2)},
            {"obstacle_sup", to_json(report.obstacle_sup)}}}};
}

bool write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", path.string().c_str());
    return false;
  }
  out << text;
  return true;
}

bool ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create output directory %s: %s\n",
                 dir.c_str(), ec.message().c_str());
    return false;
  }
  return true;
}

void print_report(const rbsde::AssumptionReport& report) {
  for (const auto& e : report.entries) {
    std::printf("%-18s %s%s  %s\n", e.name.c_str(), e.passed ? "pass" : "FAIL",
                !e.passed && e.blocking ? " (blocking)" : "", e.detail.c_str());
  }
}

rbsde::ProblemOverrides overrides_of(const CliOptions& opt) {
  return {opt.beta, opt.steps};
}

rbsde::ValidationConfig validation_config(const CliOptions& opt) {
  rbsde::ValidationConfig cfg;
  cfg.norm_paths = opt.paths;
  cfg.norm_seed = opt.seed;
  return cfg;
}

rbsde::PicardConfig picard_config(const CliOptions& opt) {
  rbsde::PicardConfig cfg;
  cfg.tol = opt.tol;
  cfg.max_iters = opt.max_iters;
  cfg.norm_paths = opt.paths;
  cfg.norm_seed = opt.seed;
  return cfg;
}

rbsde::PathSample estimate_paths(const rbsde::TimeGrid& grid, const CliOptions& opt) {
  return grid.steps <= 12 ? rbsde::all_lattice_paths(grid)
                          : rbsde::sample_lattice_paths(grid, opt.paths, opt.seed);
}

std::string solution_csv(const rbsde::SolutionTriple& sol) {
  const rbsde::TimeGrid& grid = sol.y.grid();
  std::string csv = "i,j,t,w,Y,Z,dK\n";
  for (int i = 0; i <= grid.steps; ++i) {
    for (int j = 0; j <= i; ++j) {
      csv += std::to_string(i) + ',' + std::to_string(j) + ',' +
             fmt17(grid.time(i)) + ',' + fmt17(rbsde::brownian_value(grid, i, j)) +
             ',' + fmt17(sol.y.at(i, j)) + ',' + fmt17(sol.z.at(i, j)) + ',' +
             fmt17(sol.dk.at(i, j)) + '\n';
    }
  }
  return csv;
}

std::string trace_csv(const rbsde::IterationTrace& trace) {
  // Wall time stays in memory only; serializing it would break byte-level
  // reproducibility of identical runs.
  std::string csv = "iteration,distance,ratio\n";
  for (const auto& r : trace.records) {
    csv += std::to_string(r.iteration) + ',' + fmt17(r.distance) + ',' +
           fmt17(r.ratio) + '\n';
  }
  return csv;
}

double observed_max_ratio(const rbsde::IterationTrace& trace) {
  double worst = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : trace.records) {
    if (r.iteration < 3 || !std::isfinite(r.ratio)) continue;
    if (std::isnan(worst) || r.ratio > worst) worst = r.ratio;
  }
  return worst;
}

int run_solve(const CliOptions& opt) {
  const rbsde::ProblemSpec problem =
      rbsde::build_problem(rbsde::load_problem_file(opt.config), overrides_of(opt));
  if (!ensure_out_dir(opt.out_dir)) return 1;
  const std::filesystem::path out(opt.out_dir);

  const rbsde::AssumptionReport report =
      rbsde::validate_problem(problem, validation_config(opt));
  if (!report.ok()) {
    print_report(report);
    write_text(out / "report.json", to_json(report).dump(2) + "\n");
    std::fprintf(stderr, "error: validation failed, not solving\n");
    return 1;
  }

  const rbsde::PicardResult result = rbsde::picard_solve(problem, picard_config(opt));
  const rbsde::PathSample sample = estimate_paths(problem.grid, opt);
  const rbsde::EstimateReport estimate =
      rbsde::lemma1_sides(result.solution, problem, sample);
  const rbsde::LatticeProcess obstacle =
      rbsde::LatticeProcess::bake(problem.grid, problem.obstacle);

  json ratios = json::array();
  json distances = json::array();
  for (const auto& r : result.trace.records) {
    ratios.push_back(json_number(r.ratio));
    distances.push_back(json_number(r.distance));
  }
  const json summary = {
      {"y_root", json_number(result.solution.y.at(0, 0))},
      {"k_terminal_mean", json_number(rbsde::expected_terminal_k(result.solution))},
      {"iterations", result.trace.iterations},
      {"converged", result.trace.converged},
      {"contraction_factor", json_number(rbsde::contraction_factor(problem.beta))},
      {"contraction_warning", result.trace.contraction_warning},
      {"distances", distances},
      {"ratios", ratios},
      {"skorokhod_residual",
       json_number(rbsde::skorokhod_residual(result.solution, obstacle))},
      {"lemma1", to_json(estimate)},
      {"assumptions", to_json(report)}};

  bool ok = write_text(out / "summary.json", summary.dump(2) + "\n");
  ok = write_text(out / "solution.csv", solution_csv(result.solution)) && ok;
  ok = write_text(out / "trace.csv", trace_csv(result.trace)) && ok;
  if (!ok) return 1;

  std::printf("%s in %d iterations, Y_root = %.12g, outputs in %s\n",
              result.trace.converged ? "converged" : "NOT converged",
              result.trace.iterations, result.solution.y.at(0, 0),
              opt.out_dir.c_str());
  return result.trace.converged ? 0 : 2;
}

int run_check(const CliOptions& opt) {
  const rbsde::ProblemSpec problem =
      rbsde::build_problem(rbsde::load_problem_file(opt.config), overrides_of(opt));
  const rbsde::AssumptionReport report =
      rbsde::validate_problem(problem, validation_config(opt));
  print_report(report);
  if (opt.out_dir != ".") {
    if (!ensure_out_dir(opt.out_dir)) return 1;
    write_text(std::filesystem::path(opt.out_dir) / "report.json",
               to_json(report).dump(2) + "\n");
  }
  return report.ok() ? 0 : 1;
}

int run_compare(const CliOptions& opt) {
  const rbsde::ProblemDocument doc = rbsde::load_problem_file(opt.config);
  const rbsde::ProblemSpec problem = rbsde::build_problem(doc, overrides_of(opt));
  if (!doc.oracle) {
    std::fprintf(stderr, "error: fixture names no oracle\n");
    return 1;
  }
  const rbsde::OracleDef& oracle = *doc.oracle;

  const rbsde::AssumptionReport report =
      rbsde::validate_problem(problem, validation_config(opt));
  if (!report.ok()) {
    print_report(report);
    return 1;
  }
  const rbsde::PicardResult result = rbsde::picard_solve(problem, picard_config(opt));
  if (!result.trace.converged) {
    std::fprintf(stderr, "error: solver did not converge\n");
    return 2;
  }
  const double pipeline = result.solution.y.at(0, 0);

  double oracle_value = 0.0;
  double gap = 0.0;  // the gap the tolerance applies to
  json extra;
  if (oracle.kind == "crr-put") {
    const rbsde::AmericanPutSpec spec{oracle.spot, oracle.strike, oracle.rate,
                                      oracle.sigma, problem.grid.horizon,
                                      problem.grid.steps};
    oracle_value = rbsde::crr_american_put(spec);
    gap = std::fabs(pipeline - oracle_value) / std::fabs(oracle_value);
    extra["gap_kind"] = "relative";
  } else if (oracle.kind == "linear") {
    if (doc.driver.kind != "linear") {
      std::fprintf(stderr, "error: linear oracle requires a linear driver\n");
      return 1;
    }
    for (double c : doc.driver.theta.coeffs) {
      if (c != 0.0) {
        std::fprintf(stderr, "error: linear oracle requires theta = 0\n");
        return 1;
      }
    }
    std::vector<double> terminal(static_cast<std::size_t>(problem.grid.steps) + 1);
    for (int j = 0; j <= problem.grid.steps; ++j) {
      terminal[j] =
          problem.terminal(rbsde::brownian_value(problem.grid, problem.grid.steps, j));
    }
    rbsde::LatticeProcess xi(problem.grid);
    auto slice = xi.slice(problem.grid.steps);
    for (int j = 0; j <= problem.grid.steps; ++j) slice[j] = terminal[j];
    const double xi_mean = rbsde::lattice_root_expectation(xi);
    oracle_value = rbsde::linear_bsde_value(
        [r = doc.driver.r](double t) { return r(t); }, xi_mean, problem.grid);
    gap = std::fabs(pipeline - oracle_value);
    extra["gap_kind"] = "absolute";
  } else {  // brute-force
    if (problem.grid.steps > 12) {
      std::fprintf(stderr, "error: brute-force oracle is limited to N <= 12\n");
      return 1;
    }
    // Freeze the converged driver; both solvers then target the same
    // fixed-driver problem and must agree node for node.
    rbsde::LatticeProcess g(problem.grid);
    for (int i = 0; i <= problem.grid.steps; ++i) {
      const double t = problem.grid.time(i);
      for (int j = 0; j <= i; ++j) {
        g.at(i, j) =
            problem.driver.f(t, rbsde::brownian_value(problem.grid, i, j),
                             result.solution.y.at(i, j), result.solution.z.at(i, j));
      }
    }
    const rbsde::SolutionTriple direct = rbsde::solve_fixed_driver(g, problem);
    const rbsde::SolutionTriple reference = rbsde::brute_force_reference(g, problem);
    double max_gap = 0.0;
    for (int i = 0; i <= problem.grid.steps; ++i) {
      for (int j = 0; j <= i; ++j) {
        max_gap = std::max(max_gap,
                           std::fabs(direct.y.at(i, j) - reference.y.at(i, j)));
        max_gap = std::max(max_gap,
                           std::fabs(direct.z.at(i, j) - reference.z.at(i, j)));
        max_gap = std::max(max_gap,
                           std::fabs(direct.dk.at(i, j) - reference.dk.at(i, j)));
      }
    }
    oracle_value = reference.y.at(0, 0);
    gap = max_gap;
    extra["gap_kind"] = "max-node-absolute";
  }

  const bool pass = gap <= oracle.tolerance;
  json comparison = {{"oracle", oracle.kind},
                     {"pipeline_value", json_number(pipeline)},
                     {"oracle_value", json_number(oracle_value)},
                     {"absolute_gap", json_number(std::fabs(pipeline - oracle_value))},
                     {"relative_gap",
                      json_number(oracle_value != 0.0
                                      ? std::fabs(pipeline - oracle_value) /
                                            std::fabs(oracle_value)
                                      : std::fabs(pipeline - oracle_value))},
                     {"gap", json_number(gap)},
                     {"tolerance", json_number(oracle.tolerance)},
                     {"pass", pass}};
  comparison.update(extra);

  if (opt.out_dir != ".") {
    if (!ensure_out_dir(opt.out_dir)) return 1;
    write_text(std::filesystem::path(opt.out_dir) / "comparison.json",
               comparison.dump(2) + "\n");
  }
  std::printf("%s: pipeline %.12g vs oracle %.12g, gap %.3g (tolerance %.3g) -> %s\n",
              oracle.kind.c_str(), pipeline, oracle_value, gap, oracle.tolerance,
              pass ? "pass" : "FAIL");
  return pass ? 0 : 1;
}

int run_sweep(const CliOptions& opt) {
  const rbsde::ProblemDocument doc = rbsde::load_problem_file(opt.config);
  rbsde::ProblemSpec base = rbsde::build_problem(doc, overrides_of(opt));
  const rbsde::AssumptionReport report =
      rbsde::validate_problem(base, validation_config(opt));
  if (!report.ok()) {
    print_report(report);
    return 1;
  }

  std::string csv = "beta,factor,max_ratio,iterations,converged,Y_root\n";
  for (double beta : opt.betas) {
    rbsde::ProblemSpec problem = base;
    problem.beta = beta;
    const rbsde::PicardResult result =
        rbsde::picard_solve(problem, picard_config(opt));
    csv += fmt17(beta) + ',' + fmt17(rbsde::contraction_factor(beta)) + ',' +
           fmt17(observed_max_ratio(result.trace)) + ',' +
           std::to_string(result.trace.iterations) + ',' +
           (result.trace.converged ? "1" : "0") + ',' +
           fmt17(result.solution.y.at(0, 0)) + '\n';
  }
  std::fputs(csv.c_str(), stdout);
  if (opt.out_dir != ".") {
    if (!ensure_out_dir(opt.out_dir)) return 1;
    if (!write_text(std::filesystem::path(opt.out_dir) / "sweep.csv", csv)) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflected BSDE lattice solver"};
  app.require_subcommand(1);
  CliOptions opt;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config, "problem JSON")->required();
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--beta", opt.beta, "override beta");
    cmd->add_option("--steps", opt.steps, "override grid steps N");
    cmd->add_option("--tol", opt.tol, "Picard stopping tolerance");
    cmd->add_option("--max-iters", opt.max_iters, "Picard iteration cap");
    cmd->add_option("--seed", opt.seed, "sampling seed");
    cmd->add_option("--paths", opt.paths, "Monte Carlo path count");
  };
  CLI::App* solve = app.add_subcommand("solve", "validate, solve, report");
  CLI::App* check = app.add_subcommand("check", "run the assumption validators");
  CLI::App* compare = app.add_subcommand("compare", "pipeline vs fixture oracle");
  CLI::App* sweep = app.add_subcommand("sweep-beta", "solve across a beta list");
  for (CLI::App* cmd : {solve, check, compare, sweep}) add_common(cmd);
  sweep->add_option("--betas", opt.betas, "beta values")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(opt);
    if (*check) return run_check(opt);
    if (*compare) return run_compare(opt);
    return run_sweep(opt);
  } catch (const rbsde::ProblemParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
