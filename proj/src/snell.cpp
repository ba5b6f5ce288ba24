#include "rbsde/snell.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "rbsde/kernels.hpp"

namespace rbsde {
namespace {

std::string node_message(const char* what, int i, int j) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s at node (%d,%d)", what, i, j);
  return buf;
}

void require_finite_slice(std::span<const double> slice, const char* what, int i) {
  for (std::size_t j = 0; j < slice.size(); ++j) {
    if (!std::isfinite(slice[j])) {
      throw SolveError(node_message(what, i, static_cast<int>(j)), i,
                       static_cast<int>(j));
    }
  }
}

}  // namespace

SolutionTriple solve_reflected(const LatticeProcess& g, const LatticeProcess& obstacle,
                               std::span<const double> terminal) {
  const TimeGrid& grid = g.grid();
  if (!grid.same_as(obstacle.grid())) {
    throw std::invalid_argument("solve_reflected: grid mismatch");
  }
  const int n = grid.steps;
  if (terminal.size() != static_cast<std::size_t>(n) + 1) {
    throw std::invalid_argument("solve_reflected: terminal slice length mismatch");
  }
  for (int i = 0; i <= n; ++i) {
    require_finite_slice(g.slice(i), "non-finite driver value", i);
    require_finite_slice(obstacle.slice(i), "non-finite obstacle value", i);
  }
  require_finite_slice(terminal, "non-finite terminal value", n);

  SolutionTriple sol{LatticeProcess(grid), LatticeProcess(grid), LatticeProcess(grid)};
  auto yn = sol.y.slice(n);
  for (int j = 0; j <= n; ++j) yn[j] = terminal[j];

  const auto& ops = kernels::active_ops();
  const double inv_two_sqrt_dt = 1.0 / (2.0 * grid.sqrt_dt);
  for (int i = n - 1; i >= 0; --i) {
    ops.snell_step(sol.y.slice(i + 1).data(), g.slice(i).data(),
                   obstacle.slice(i).data(), grid.dt, inv_two_sqrt_dt,
                   sol.y.slice(i).data(), sol.z.slice(i).data(),
                   sol.dk.slice(i).data(), static_cast<std::size_t>(i) + 1);
    require_finite_slice(sol.y.slice(i), "value overflow", i);
  }
  return sol;
}

SolutionTriple solve_fixed_driver(const LatticeProcess& g, const ProblemSpec& problem) {
  if (!g.grid().same_as(problem.grid)) {
    throw std::invalid_argument("solve_fixed_driver: grid mismatch");
  }
  const LatticeProcess obstacle = LatticeProcess::bake(problem.grid, problem.obstacle);
  std::vector<double> terminal(static_cast<std::size_t>(problem.grid.steps) + 1);
  for (int j = 0; j <= problem.grid.steps; ++j) {
    terminal[j] = problem.terminal(brownian_value(problem.grid, problem.grid.steps, j));
  }
  return solve_reflected(g, obstacle, terminal);
}

std::vector<double> accumulate_k(const SolutionTriple& sol, const LatticePath& path) {
  const int n = sol.dk.steps();
  if (path.steps() != n) {
    throw std::invalid_argument("accumulate_k: path/grid step mismatch");
  }
  std::vector<double> k(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    k[i + 1] = k[i] + sol.dk.at(i, path.up_counts[i]);
  }
  return k;
}

double expected_terminal_k(const SolutionTriple& sol) {
  const LatticeProcess prob = forward_node_probabilities(sol.dk.grid());
  double total = 0.0;
  for (int i = 0; i < sol.dk.steps(); ++i) {
    for (int j = 0; j <= i; ++j) {
      total += prob.at(i, j) * sol.dk.at(i, j);
    }
  }
  return total;
}

double skorokhod_residual(const SolutionTriple& sol, const LatticeProcess& obstacle) {
  if (!sol.y.grid().same_as(obstacle.grid())) {
    throw std::invalid_argument("skorokhod_residual: grid mismatch");
  }
  const LatticeProcess prob = forward_node_probabilities(sol.y.grid());
  double total = 0.0;
  for (int i = 0; i < sol.y.steps(); ++i) {
    for (int j = 0; j <= i; ++j) {
      total += prob.at(i, j) * (sol.y.at(i, j) - obstacle.at(i, j)) * sol.dk.at(i, j);
    }
  }
  return total;
}

NormEstimate skorokhod_residual(const SolutionTriple& sol,
                                const LatticeProcess& obstacle,
                                const PathSample& paths) {
  if (!sol.y.grid().same_as(obstacle.grid())) {
    throw std::invalid_argument("skorokhod_residual: grid mismatch");
  }
  return pathwise_expectation(paths, [&](const LatticePath& path) {
    double acc = 0.0;
    for (int i = 0; i < sol.y.steps(); ++i) {
      const int j = path.up_counts[i];
      acc += (sol.y.at(i, j) - obstacle.at(i, j)) * sol.dk.at(i, j);
    }
    return acc;
  });
}

SolutionTriple brute_force_reference(const LatticeProcess& g,
                                     const ProblemSpec& problem) {
  const TimeGrid& grid = problem.grid;
  if (!g.grid().same_as(grid)) {
    throw std::invalid_argument("brute_force_reference: grid mismatch");
  }
  const int n = grid.steps;
  if (n > 12) {
    throw std::invalid_argument("brute_force_reference: limited to 12 steps");
  }

  // Tree node (i, mask): bit k of mask is move k. The path integral of the
  // driver is pushed forward; both children of a node share it because the
  // node's own g multiplies dt before the move.
  std::vector<std::vector<double>> path_g(static_cast<std::size_t>(n) + 1);
  path_g[0] = {0.0};
  for (int i = 0; i < n; ++i) {
    const auto& cur = path_g[i];
    auto& next = path_g[i + 1];
    next.resize(std::size_t{1} << (i + 1));
    for (std::size_t mask = 0; mask < cur.size(); ++mask) {
      const int j = std::popcount(mask);
      const double base = cur[mask] + g.at(i, j) * grid.dt;
      next[mask] = base;
      next[mask | (std::size_t{1} << i)] = base;
    }
  }

  // Backward optimal stopping on the shifted payoff: stopping at i < N pays
  // path_g + S, stopping at N pays path_g + xi; the shift cancels when the
  // running integral is subtracted again.
  SolutionTriple sol{LatticeProcess(grid), LatticeProcess(grid), LatticeProcess(grid)};
  // Ascending mask order visits the canonical representative of (i, j),
  // mask = 2^j - 1, before any other path reaching that lattice node.
  const auto check_merge = [&](const LatticeProcess& target, int i, int j,
                               double value) {
    const double canon = target.at(i, j);
    if (std::fabs(value - canon) > 1e-9 * std::max(1.0, std::fabs(canon))) {
      throw std::logic_error(node_message(
          "merged tree nodes disagree (non-Markovian data?)", i, j));
    }
  };

  std::vector<double> tilde(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < tilde.size(); ++mask) {
    const int j = std::popcount(mask);
    tilde[mask] = path_g[n][mask] + problem.terminal(brownian_value(grid, n, j));
  }
  for (std::size_t mask = 0; mask < tilde.size(); ++mask) {
    const int j = std::popcount(mask);
    const double y = tilde[mask] - path_g[n][mask];
    if (mask == (std::size_t{1} << j) - 1) {
      sol.y.at(n, j) = y;
    } else {
      check_merge(sol.y, n, j, y);
    }
  }

  const double inv_two_sqrt_dt = 1.0 / (2.0 * grid.sqrt_dt);
  std::vector<double> tilde_prev;
  for (int i = n - 1; i >= 0; --i) {
    const std::size_t level = std::size_t{1} << i;
    tilde_prev.resize(level);
    for (std::size_t mask = 0; mask < level; ++mask) {
      const int j = std::popcount(mask);
      const double down = tilde[mask];
      const double up = tilde[mask | (std::size_t{1} << i)];
      const double cont = 0.5 * (down + up);
      const double exercise =
          path_g[i][mask] + problem.obstacle(grid.time(i), brownian_value(grid, i, j));
      const double value = exercise > cont ? exercise : cont;
      tilde_prev[mask] = value;

      const double y = value - path_g[i][mask];
      const double z = (up - down) * inv_two_sqrt_dt;
      const double dk = value - cont;
      if (mask == (std::size_t{1} << j) - 1) {
        sol.y.at(i, j) = y;
        sol.z.at(i, j) = z;
        sol.dk.at(i, j) = dk;
      } else {
        check_merge(sol.y, i, j, y);
        check_merge(sol.z, i, j, z);
        check_merge(sol.dk, i, j, dk);
      }
    }
    tilde.swap(tilde_prev);
  }
  return sol;
}

SolutionTriple scale_solution(const SolutionTriple& sol, double lambda) {
  SolutionTriple scaled = sol;
  for (double& v : scaled.y.raw()) v *= lambda;
  for (double& v : scaled.z.raw()) v *= lambda;
  for (double& v : scaled.dk.raw()) v *= lambda;
  return scaled;
}

}  // namespace rbsde
