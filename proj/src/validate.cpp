#include "rbsde/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <random>

namespace rbsde {
namespace {

std::string format(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

double unit_draw(std::mt19937_64& engine) {
  // 53 uniform bits in [0, 1); avoids implementation-defined distributions.
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace

CheckEntry check_h1_lipschitz(const DriverSpec& driver, const TimeGrid& grid,
                              std::uint64_t probe_seed, int probe_count,
                              double box, double tol) {
  std::mt19937_64 engine(probe_seed);
  CheckEntry entry;
  entry.name = "H1";
  entry.blocking = false;

  double worst = 0.0;
  for (int probe = 0; probe < probe_count; ++probe) {
    const int i = static_cast<int>(engine() % static_cast<std::uint64_t>(grid.steps + 1));
    const int j = static_cast<int>(engine() % static_cast<std::uint64_t>(i + 1));
    const double t = grid.time(i);
    const double w = brownian_value(grid, i, j);
    const double y1 = box * (2.0 * unit_draw(engine) - 1.0);
    const double z1 = box * (2.0 * unit_draw(engine) - 1.0);
    const double y2 = box * (2.0 * unit_draw(engine) - 1.0);
    const double z2 = box * (2.0 * unit_draw(engine) - 1.0);
    const double lhs = std::fabs(driver.f(t, w, y1, z1) - driver.f(t, w, y2, z2));
    const double bound = driver.mu(t, w) * std::fabs(y1 - y2) +
                         driver.gamma(t, w) * std::fabs(z1 - z2) + tol;
    const double excess = lhs - bound;
    if (excess > worst) {
      worst = excess;
      entry.node_i = i;
      entry.node_j = j;
      entry.detail = format(
          "|f(y1,z1)-f(y2,z2)| exceeds the bound by %.6g at node (%d,%d), "
          "y1=%.6g z1=%.6g y2=%.6g z2=%.6g",
          excess, i, j, y1, z1, y2, z2);
    }
  }
  entry.passed = worst <= 0.0;
  entry.magnitude = worst;
  if (entry.passed) {
    entry.detail = format("%d probes within the Lipschitz bound", probe_count);
  }
  return entry;
}

CheckEntry check_h2_epsilon(const DriverSpec& driver, const TimeGrid& grid) {
  CheckEntry entry;
  entry.name = "H2";
  entry.blocking = true;

  double min_a2 = std::numeric_limits<double>::infinity();
  int min_i = 0;
  int min_j = 0;
  for (int i = 0; i <= grid.steps; ++i) {
    const double t = grid.time(i);
    for (int j = 0; j <= i; ++j) {
      const double a2 = driver.a_squared(t, brownian_value(grid, i, j));
      if (a2 < min_a2) {
        min_a2 = a2;
        min_i = i;
        min_j = j;
      }
    }
  }
  entry.passed = min_a2 >= driver.epsilon;
  entry.magnitude = entry.passed ? 0.0 : driver.epsilon - min_a2;
  entry.node_i = min_i;
  entry.node_j = min_j;
  entry.detail = format("min a^2 = %.6g at node (%d,%d), epsilon = %.6g", min_a2,
                        min_i, min_j, driver.epsilon);
  return entry;
}

AssumptionReport check_h3_h4_h5(const ProblemSpec& problem, const PathSample& paths,
                                double terminal_tol) {
  const TimeGrid& grid = problem.grid;
  AssumptionReport report;
  const WeightField weight = weight_field(problem.driver, grid);

  std::vector<double> terminal(static_cast<std::size_t>(grid.steps) + 1);
  for (int j = 0; j <= grid.steps; ++j) {
    terminal[j] = problem.terminal(brownian_value(grid, grid.steps, j));
  }

  const LatticeProcess f0_over_a = LatticeProcess::bake(grid, [&](double t, double w) {
    return problem.driver.f(t, w, 0.0, 0.0) / std::sqrt(problem.driver.a_squared(t, w));
  });
  const LatticeProcess obstacle_plus = LatticeProcess::bake(
      grid, [&](double t, double w) { return std::max(problem.obstacle(t, w), 0.0); });

  report.f0_norm = weighted_h2_norm(f0_over_a, weight, problem.beta, paths);
  report.xi_norm = terminal_weighted_l2(terminal, weight, problem.beta, paths);
  report.obstacle_norm =
      weighted_running_sup_norm(obstacle_plus, weight, 2.0 * problem.beta, paths);

  CheckEntry h3;
  h3.name = "H3";
  h3.passed = std::isfinite(report.f0_norm.value);
  h3.magnitude = h3.passed ? 0.0 : std::numeric_limits<double>::infinity();
  h3.detail = format("|f(.,0,0)/a|^2 in H2(beta,a) = %.6g", report.f0_norm.value);
  report.entries.push_back(std::move(h3));

  CheckEntry h4;
  h4.name = "H4";
  h4.passed = std::isfinite(report.xi_norm.value);
  h4.magnitude = h4.passed ? 0.0 : std::numeric_limits<double>::infinity();
  h4.detail = format("|xi|^2 in L2(beta,a) = %.6g", report.xi_norm.value);
  report.entries.push_back(std::move(h4));

  CheckEntry h5_norm;
  h5_norm.name = "H5-obstacle-norm";
  h5_norm.passed = std::isfinite(report.obstacle_norm.value);
  h5_norm.magnitude = h5_norm.passed ? 0.0 : std::numeric_limits<double>::infinity();
  h5_norm.detail =
      format("E[sup e^{2 beta A}(S+)^2] = %.6g", report.obstacle_norm.value);
  report.entries.push_back(std::move(h5_norm));

  CheckEntry h5;
  h5.name = "H5-terminal";
  h5.blocking = true;
  double worst_gap = -std::numeric_limits<double>::infinity();
  int worst_j = 0;
  for (int j = 0; j <= grid.steps; ++j) {
    const double w = brownian_value(grid, grid.steps, j);
    const double gap = problem.obstacle(grid.horizon, w) - terminal[j];
    if (gap > worst_gap) {
      worst_gap = gap;
      worst_j = j;
    }
  }
  h5.passed = worst_gap <= terminal_tol;
  h5.magnitude = h5.passed ? 0.0 : worst_gap;
  h5.node_i = grid.steps;
  h5.node_j = worst_j;
  h5.detail = format("max S(T,.) - xi = %.6g at terminal node (%d,%d)", worst_gap,
                     grid.steps, worst_j);
  report.entries.push_back(std::move(h5));

  return report;
}

AssumptionReport validate_problem(const ProblemSpec& problem,
                                  const ValidationConfig& config) {
  const TimeGrid& grid = problem.grid;
  AssumptionReport report;

  CheckEntry params;
  params.name = "parameters";
  params.blocking = true;
  params.passed = problem.beta > 0.0 && problem.driver.epsilon > 0.0 &&
                  std::isfinite(problem.beta) && std::isfinite(problem.driver.epsilon);
  params.detail = format("beta = %.6g, epsilon = %.6g", problem.beta,
                         problem.driver.epsilon);
  report.entries.push_back(std::move(params));

  CheckEntry sign;
  sign.name = "coefficient-sign";
  sign.blocking = true;
  CheckEntry finite;
  finite.name = "finite-data";
  finite.blocking = true;
  double worst_negative = 0.0;
  for (int i = 0; i <= grid.steps && (sign.passed || finite.passed); ++i) {
    const double t = grid.time(i);
    for (int j = 0; j <= i; ++j) {
      const double w = brownian_value(grid, i, j);
      const double m = problem.driver.mu(t, w);
      const double g = problem.driver.gamma(t, w);
      const double s = problem.obstacle(t, w);
      if (sign.passed && (!(m >= 0.0) || !(g >= 0.0))) {
        sign.passed = false;
        worst_negative = std::min(m, g);
        sign.node_i = i;
        sign.node_j = j;
        sign.detail = format("mu = %.6g, gamma = %.6g at node (%d,%d)", m, g, i, j);
      }
      if (finite.passed && !std::isfinite(s)) {
        finite.passed = false;
        finite.node_i = i;
        finite.node_j = j;
        finite.detail = format("obstacle not finite at node (%d,%d)", i, j);
      }
    }
  }
  if (finite.passed) {
    for (int j = 0; j <= grid.steps; ++j) {
      if (!std::isfinite(problem.terminal(brownian_value(grid, grid.steps, j)))) {
        finite.passed = false;
        finite.node_i = grid.steps;
        finite.node_j = j;
        finite.detail = format("terminal value not finite at node (%d,%d)",
                               grid.steps, j);
        break;
      }
    }
  }
  sign.magnitude = sign.passed ? 0.0 : -worst_negative;
  if (sign.passed) sign.detail = "mu, gamma nonnegative at every node";
  if (finite.passed) finite.detail = "obstacle and terminal finite at every node";
  report.entries.push_back(std::move(sign));
  report.entries.push_back(std::move(finite));

  report.entries.push_back(check_h1_lipschitz(problem.driver, grid, config.probe_seed,
                                              config.probe_count, config.probe_box,
                                              config.probe_tol));
  report.entries.push_back(check_h2_epsilon(problem.driver, grid));

  // Sup-type norms are pathwise even under deterministic coefficients, so a
  // real sample is always drawn; the H2/L2 norms still come out exact when
  // the weight allows it.
  const PathSample paths =
      sample_lattice_paths(grid, config.norm_paths, config.norm_seed);
  AssumptionReport bundle = check_h3_h4_h5(problem, paths, config.terminal_tol);
  report.xi_norm = bundle.xi_norm;
  report.f0_norm = bundle.f0_norm;
  report.obstacle_norm = bundle.obstacle_norm;
  for (auto& e : bundle.entries) report.entries.push_back(std::move(e));

  return report;
}

}  // namespace rbsde
