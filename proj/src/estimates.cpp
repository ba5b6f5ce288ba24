#include "rbsde/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rbsde {

EstimateReport lemma1_sides(const SolutionTriple& sol, const ProblemSpec& problem,
                            const PathSample& paths) {
  const TimeGrid& grid = problem.grid;
  if (!sol.y.grid().same_as(grid)) {
    throw std::invalid_argument("lemma1_sides: grid mismatch");
  }
  const WeightField weight = weight_field(problem.driver, grid);

  EstimateReport report;
  report.beta_low_warning = problem.beta <= 12.0;

  report.y_running_sup =
      weighted_running_sup_norm(sol.y, weight, problem.beta, paths);
  report.z_h2 = weighted_h2_norm(sol.z, weight, problem.beta, paths);
  report.ya_h2 = weighted_pair_norm(sol.y, nullptr, weight, problem.beta, paths);
  report.k_terminal_sq = pathwise_expectation(paths, [&](const LatticePath& path) {
    double k = 0.0;
    for (int i = 0; i < grid.steps; ++i) {
      k += sol.dk.at(i, path.up_counts[i]);
    }
    return k * k;
  });

  std::vector<double> terminal(static_cast<std::size_t>(grid.steps) + 1);
  for (int j = 0; j <= grid.steps; ++j) {
    terminal[j] = problem.terminal(brownian_value(grid, grid.steps, j));
  }
  report.xi_l2 = terminal_weighted_l2(terminal, weight, problem.beta, paths);

  const LatticeProcess f0_over_a = LatticeProcess::bake(grid, [&](double t, double w) {
    return problem.driver.f(t, w, 0.0, 0.0) / std::sqrt(problem.driver.a_squared(t, w));
  });
  report.f0_h2 = weighted_h2_norm(f0_over_a, weight, problem.beta, paths);

  const LatticeProcess obstacle_plus = LatticeProcess::bake(
      grid, [&](double t, double w) { return std::max(problem.obstacle(t, w), 0.0); });
  report.obstacle_sup =
      weighted_running_sup_norm(obstacle_plus, weight, 2.0 * problem.beta, paths);

  report.lhs = report.y_running_sup.value + report.z_h2.value + report.ya_h2.value +
               report.k_terminal_sq.value;
  report.rhs = report.xi_l2.value + report.f0_h2.value + report.obstacle_sup.value;
  if (report.rhs > 0.0) {
    report.ratio = report.lhs / report.rhs;
  } else {
    report.ratio =
        report.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return report;
}

SuiteRatios lemma1_ratio_suite(const std::vector<ProblemSpec>& problems, double beta,
                               const PicardConfig& config) {
  if (problems.empty()) {
    throw std::invalid_argument("lemma1_ratio_suite: empty suite");
  }
  SuiteRatios suite;
  for (std::size_t idx = 0; idx < problems.size(); ++idx) {
    ProblemSpec problem = problems[idx];
    problem.beta = beta;
    const PicardResult run = picard_solve(problem, config);
    const PathSample paths =
        problem.grid.steps <= 12
            ? all_lattice_paths(problem.grid)
            : sample_lattice_paths(problem.grid, config.norm_paths, config.norm_seed);
    EstimateReport report = lemma1_sides(run.solution, problem, paths);
    if (report.rhs > 0.0) {
      suite.ratios.push_back(report.ratio);
      suite.max_ratio = std::max(suite.max_ratio, report.ratio);
    } else {
      suite.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
      suite.zero_rhs_indices.push_back(idx);
    }
    suite.reports.push_back(std::move(report));
  }
  return suite;
}

}  // namespace rbsde
