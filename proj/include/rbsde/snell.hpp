#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbsde/driver.hpp"
#include "rbsde/lattice.hpp"
#include "rbsde/norms.hpp"
#include "rbsde/paths.hpp"

namespace rbsde {

/// Discrete solution of the reflected dynamics. Y lives on every node;
/// Z and the compensator increment ΔK live on nodes with i < N (their
/// terminal slices are zero). K itself is pathwise: K_0 = 0 and
/// K_{i+1} = K_i + ΔK(node_i), so ΔK at a node acts on the step it opens.
struct SolutionTriple {
  LatticeProcess y;
  LatticeProcess z;
  LatticeProcess dk;
};

/// Non-finite value met while solving, located at its first offending node.
struct SolveError : std::runtime_error {
  SolveError(const std::string& message, int i, int j)
      : std::runtime_error(message), node_i(i), node_j(j) {}
  int node_i;
  int node_j;
};

/// Backward reflected dynamic program with every input already baked:
/// Y_N = terminal, then per node c = 0.5(Y_dn + Y_up) + g·dt,
/// Y = max(S, c), ΔK = (S − c)⁺, Z = (Y_up − Y_dn)/(2√dt).
SolutionTriple solve_reflected(const LatticeProcess& g, const LatticeProcess& obstacle,
                               std::span<const double> terminal);

/// Convenience wrapper: bakes the problem's obstacle and terminal data and
/// runs solve_reflected. g is the frozen driver (independent of Y, Z).
SolutionTriple solve_fixed_driver(const LatticeProcess& g, const ProblemSpec& problem);

/// K along one path (length N+1, starts at 0).
std::vector<double> accumulate_k(const SolutionTriple& sol, const LatticePath& path);

/// Exact E[K_T] under the lattice measure (linear in the increments, so no
/// sampling is needed regardless of the coefficients).
double expected_terminal_k(const SolutionTriple& sol);

/// E[Σ_i (Y_i − S_i)·ΔK_i], exact via node probabilities. Zero by
/// construction for solver output; reported to guard against drift.
double skorokhod_residual(const SolutionTriple& sol, const LatticeProcess& obstacle);

/// Path-sampled variant of the residual (consistency check for the exact one).
NormEstimate skorokhod_residual(const SolutionTriple& sol,
                                const LatticeProcess& obstacle,
                                const PathSample& paths);

/// Reference solver on the full non-recombining path tree (2^N leaves):
/// optimal stopping by backward induction over all stopping rules, folded
/// back to the lattice. Shares no stepping code with solve_reflected.
/// Rejects N > 12; rejects non-Markovian folds (merged nodes must agree).
SolutionTriple brute_force_reference(const LatticeProcess& g, const ProblemSpec& problem);

/// (λY, λZ, λΔK); pairs with scale_problem for homogeneity checks.
SolutionTriple scale_solution(const SolutionTriple& sol, double lambda);

}  // namespace rbsde
