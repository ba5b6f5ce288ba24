#include "rbsde/picard.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rbsde/lattice.hpp"
#include "test_util.hpp"

using namespace rbsde;

namespace {

// The put-flavored problem with genuine (y, z) coupling in the driver.
ProblemSpec coupled_problem(int steps, double beta) {
  const double r = 0.3;
  const double theta = 0.4;
  ProblemSpec p;
  p.grid = build_time_grid(1.0, steps);
  p.driver.f = [r, theta](double, double, double y, double z) {
    return -(r * y + theta * z);
  };
  p.driver.mu = CoefficientProcess::constant(r);
  p.driver.gamma = CoefficientProcess::constant(theta);
  p.driver.epsilon = 0.4;
  const double drift = r - 0.5 * theta * theta;
  const auto payoff = [drift, theta](double t, double w) {
    return std::max(1.0 - std::exp(drift * t + theta * w), 0.0);
  };
  p.terminal = [payoff](double w) { return payoff(1.0, w); };
  p.obstacle = payoff;
  p.beta = beta;
  return p;
}

LatticeProcess propagate_terminal(const ProblemSpec& p) {
  LatticeProcess y(p.grid);
  const int n = p.grid.steps;
  auto last = y.slice(n);
  for (int j = 0; j <= n; ++j) last[j] = p.terminal(brownian_value(p.grid, n, j));
  for (int i = n - 1; i >= 0; --i) {
    const auto stepped = conditional_expectation_step(y.slice(i + 1));
    auto s = y.slice(i);
    for (int j = 0; j <= i; ++j) s[j] = stepped[j];
  }
  return y;
}

}  // namespace

TEST_CASE("contraction factor formula and its inverse") {
  CHECK(contraction_factor(12.0) == doctest::Approx(1.0 / 12.0 + 0.5).epsilon(1e-15));
  CHECK(contraction_factor(20.0) < contraction_factor(12.0));
  CHECK(contraction_factor(1e9) < 1e-8);
  CHECK_THROWS_AS(contraction_factor(0.0), std::invalid_argument);
  CHECK_THROWS_AS(contraction_factor(-3.0), std::invalid_argument);

  const double break_even = 3.0 + std::sqrt(21.0);
  CHECK(contraction_factor(break_even) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(min_beta_for_factor(1.0) == doctest::Approx(break_even).epsilon(1e-15));
  CHECK(min_beta_for_factor(0.5) ==
        doctest::Approx(13.745966692414834).epsilon(1e-15));

  for (double rho = 0.05; rho <= 1.0; rho += 0.05) {
    CHECK(contraction_factor(min_beta_for_factor(rho)) ==
          doctest::Approx(rho).epsilon(1e-10));
  }
  CHECK_THROWS_AS(min_beta_for_factor(0.0), std::invalid_argument);
  CHECK_THROWS_AS(min_beta_for_factor(-0.5), std::invalid_argument);
  CHECK_THROWS_AS(min_beta_for_factor(1.0 + 1e-9), std::invalid_argument);
}

TEST_CASE("phi map freezes the driver") {
  ProblemSpec p = testutil::constant_problem(1.0, 16, 1.0, 14.0, 0.3, 0.0, -5.0);
  const LatticeProcess u =
      LatticeProcess::bake(p.grid, [](double t, double w) { return t * w; });
  const LatticeProcess v =
      LatticeProcess::bake(p.grid, [](double, double w) { return w; });

  // f independent of (y, z): any guess produces the same output.
  const SolutionTriple from_guess = phi_map(u, v, p);
  const LatticeProcess g =
      LatticeProcess::bake(p.grid, [](double, double) { return 0.3; });
  const SolutionTriple direct = solve_fixed_driver(g, p);
  CHECK(from_guess.y.raw()[0] == direct.y.raw()[0]);
  for (std::size_t k = 0; k < from_guess.y.raw().size(); ++k) {
    CHECK(from_guess.y.raw()[k] == direct.y.raw()[k]);
  }
}

TEST_CASE("first two Picard iterates of the linear driver") {
  const double r = 0.05;
  ProblemSpec p = testutil::constant_problem(1.0, 4, r, 14.0, 0.0, 1.0, -1e6);
  p.driver.f = [r](double, double, double y, double) { return -r * y; };

  const LatticeProcess zero(p.grid);
  const SolutionTriple first = phi_map(zero, zero, p);
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; j <= i; ++j) CHECK(first.y.at(i, j) == 1.0);
  }

  const SolutionTriple second = phi_map(first.y, first.z, p);
  CHECK(second.y.at(0, 0) == doctest::Approx(1.0 - r).epsilon(1e-9));

  // Cross-check the second iterate against the path-tree reference.
  const LatticeProcess g =
      LatticeProcess::bake(p.grid, [r](double, double) { return -r; });
  const SolutionTriple reference = brute_force_reference(g, p);
  CHECK(second.y.at(0, 0) ==
        doctest::Approx(reference.y.at(0, 0)).epsilon(1e-12));
}

TEST_CASE("beta distance on hand-checkable pairs") {
  ProblemSpec p = testutil::constant_problem(1.0, 8, 1.0, 0.0, 0.0, 0.0, -1.0);
  const PathSample paths = sample_lattice_paths(p.grid, 1, 1);
  const LatticeProcess zero(p.grid);
  const LatticeProcess one =
      LatticeProcess::bake(p.grid, [](double, double) { return 1.0; });

  CHECK(beta_distance(one, one, one, one, p, paths).value == 0.0);

  // Z differs by 1, beta = 0: E sum 1·dt = 1 on the dyadic grid.
  CHECK(beta_distance(zero, one, zero, zero, p, paths).value == 1.0);

  // Y differs by 1 with a² = 0.25: the Y term carries the weight.
  ProblemSpec quarter = p;
  quarter.driver.mu = CoefficientProcess::constant(0.25);
  CHECK(beta_distance(one, zero, zero, zero, quarter, paths).value == 0.25);
}

TEST_CASE("drivers independent of (y, z) converge in exactly two sweeps") {
  ProblemSpec p = testutil::constant_problem(1.0, 32, 1.0, 14.0, 0.5, 0.0, -2.0);
  const PicardResult run = picard_solve(p);
  CHECK(run.trace.converged);
  CHECK(run.trace.iterations == 2);
  REQUIRE(run.trace.records.size() == 2u);
  CHECK(run.trace.records[0].distance > 0.0);
  CHECK(run.trace.records[1].distance == 0.0);
  CHECK(run.solution.y.at(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(!run.trace.contraction_warning);
}

TEST_CASE("linear fixture reproduces the discounted value") {
  const double r = 0.05;
  ProblemSpec p = testutil::constant_problem(1.0, 200, r, 20.0, 0.0, 1.0, -10.0);
  p.driver.f = [r](double, double, double y, double) { return -r * y; };
  const PicardResult run = picard_solve(p);
  CHECK(run.trace.converged);
  CHECK(run.solution.y.at(0, 0) ==
        doctest::Approx(std::exp(-r)).epsilon(1e-3));
}

TEST_CASE("observed contraction beats the factor with slack") {
  ProblemSpec p = coupled_problem(96, min_beta_for_factor(0.5));
  PicardConfig config;
  config.tol = 1e-12;
  const PicardResult run = picard_solve(p, config);
  CHECK(run.trace.converged);
  for (const auto& record : run.trace.records) {
    if (record.iteration >= 3 && std::isfinite(record.ratio)) {
      const double prev =
          run.trace.records[static_cast<std::size_t>(record.iteration) - 2].distance;
      if (prev > 1e-14) CHECK(record.ratio <= 0.55);
    }
  }
}

TEST_CASE("fixed points from different guesses coincide") {
  ProblemSpec p = coupled_problem(64, 20.0);
  PicardConfig from_zero;
  from_zero.tol = 1e-12;
  const PicardResult a = picard_solve(p, from_zero);

  PicardConfig from_terminal = from_zero;
  from_terminal.initial_y = propagate_terminal(p);
  const PicardResult b = picard_solve(p, from_terminal);

  CHECK(a.trace.converged);
  CHECK(b.trace.converged);
  const PathSample paths = sample_lattice_paths(p.grid, 1, 1);
  const double gap = beta_distance(a.solution.y, a.solution.z, b.solution.y,
                                   b.solution.z, p, paths)
                         .value;
  CHECK(gap <= 10.0 * from_zero.tol);

  const double k_a = expected_terminal_k(a.solution);
  const double k_b = expected_terminal_k(b.solution);
  CHECK(std::fabs(k_a - k_b) <= 1e-6 * (1.0 + std::fabs(k_a)));
}

TEST_CASE("one more sweep barely moves the fixed point") {
  ProblemSpec p = coupled_problem(48, 20.0);
  PicardConfig config;
  config.tol = 1e-12;
  const PicardResult run = picard_solve(p, config);
  REQUIRE(run.trace.converged);

  const SolutionTriple extra = phi_map(run.solution.y, run.solution.z, p);
  const PathSample paths = sample_lattice_paths(p.grid, 1, 1);
  const double moved = beta_distance(run.solution.y, run.solution.z, extra.y,
                                     extra.z, p, paths)
                           .value;
  const double rho = contraction_factor(p.beta);
  const double d_last = run.trace.records.back().distance;
  CHECK(moved <= std::max(config.tol, rho * d_last));
}

TEST_CASE("the weight only shapes the metric, never the fixed point") {
  // Constant mu, gamma: solving under the beta = 0 metric must land on the
  // same triple as the weighted run.
  ProblemSpec p = coupled_problem(64, 20.0);
  PicardConfig config;
  // Deep stop: node-level agreement at 1e-9 needs the squared step distance
  // far below it.
  config.tol = 1e-18;
  const PicardResult weighted = picard_solve(p, config);

  ProblemSpec flat = p;
  flat.beta = 0.0;
  const PicardResult unweighted = picard_solve(flat, config);
  CHECK(unweighted.trace.contraction_warning);

  CHECK(weighted.trace.converged);
  CHECK(unweighted.trace.converged);
  const auto wy = weighted.solution.y.raw();
  const auto uy = unweighted.solution.y.raw();
  for (std::size_t k = 0; k < wy.size(); ++k) {
    CHECK(std::fabs(wy[k] - uy[k]) <= 1e-9);
  }
}

TEST_CASE("non-convergence is a status, not an exception") {
  ProblemSpec p = coupled_problem(32, 20.0);
  PicardConfig config;
  config.tol = 1e-30;  // unreachable
  config.max_iters = 3;
  const PicardResult run = picard_solve(p, config);
  CHECK(!run.trace.converged);
  CHECK(run.trace.iterations == 3);
  CHECK(run.trace.records.size() == 3u);
}

TEST_CASE("picard configuration is validated") {
  ProblemSpec p = testutil::constant_problem(1.0, 8, 1.0, 14.0, 0.0, 0.0, -1.0);
  PicardConfig bad_tol;
  bad_tol.tol = 0.0;
  CHECK_THROWS_AS(picard_solve(p, bad_tol), std::invalid_argument);
  PicardConfig bad_iters;
  bad_iters.max_iters = 0;
  CHECK_THROWS_AS(picard_solve(p, bad_iters), std::invalid_argument);

  PicardConfig wrong_grid;
  wrong_grid.initial_y = LatticeProcess(build_time_grid(1.0, 4));
  CHECK_THROWS_AS(picard_solve(p, wrong_grid), std::invalid_argument);
}
