#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rbsde/driver.hpp"
#include "rbsde/norms.hpp"
#include "rbsde/snell.hpp"

namespace rbsde {

struct PicardConfig {
  double tol = 1e-12;  // on the squared step distance d_k
  int max_iters = 60;
  std::optional<LatticeProcess> initial_y;  // default: zero process
  std::optional<LatticeProcess> initial_z;
  std::size_t norm_paths = 10000;  // used only when coefficients are stochastic
  std::uint64_t norm_seed = 424242;
};

struct IterationRecord {
  int iteration = 0;      // k, counting applications of the map from 1
  double distance = 0.0;  // d_k, squared step size in the weighted norm
  double ratio = std::numeric_limits<double>::quiet_NaN();  // d_k / d_{k-1}
  double wall_seconds = 0.0;  // kept in memory; serialized traces omit it
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
  int iterations = 0;
  bool contraction_warning = false;  // set when contraction_factor(beta) >= 1
};

struct PicardResult {
  SolutionTriple solution;
  IterationTrace trace;
};

/// 12/β² + 6/β; below 1 the iteration provably contracts. Rejects β ≤ 0.
double contraction_factor(double beta);

/// Smallest β with contraction_factor(β) ≤ ρ: the positive root of
/// ρβ² − 6β − 12. Rejects ρ outside (0, 1]; ρ = 1 returns the
/// break-even β = 3 + √21.
double min_beta_for_factor(double rho);

/// One sweep of the fixed-point map: freeze (U, V) inside the driver and
/// solve the resulting fixed-driver problem.
SolutionTriple phi_map(const LatticeProcess& u, const LatticeProcess& v,
                       const ProblemSpec& problem);

/// Squared distance E[Σ e^{βA}(a²·ΔY² + ΔZ²) dt] between two (Y, Z) pairs.
NormEstimate beta_distance(const LatticeProcess& y1, const LatticeProcess& z1,
                           const LatticeProcess& y2, const LatticeProcess& z2,
                           const ProblemSpec& problem, const PathSample& paths);

/// Iterate the map from the initial guess until d_k ≤ tol (k ≥ 2 required,
/// so a constant map still registers one confirming sweep) or max_iters.
/// Non-convergence is a status on the trace, not an exception.
PicardResult picard_solve(const ProblemSpec& problem, const PicardConfig& config = {});

}  // namespace rbsde
