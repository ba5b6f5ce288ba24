#pragma once

#include <cstddef>
#include <vector>

#include "rbsde/driver.hpp"
#include "rbsde/norms.hpp"
#include "rbsde/picard.hpp"
#include "rbsde/snell.hpp"

namespace rbsde {

/// Both sides of the a-priori stability estimate, term by term.
/// lhs = E[sup e^{βA}Y²] + E[∫e^{βA}Z²] + E[∫e^{βA}a²Y²] + E[K_T²]
/// rhs = E[e^{βA(T)}ξ²] + E[∫e^{βA}(f(·,0,0)/a)²] + E[sup e^{2βA}(S⁺)²]
struct EstimateReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs/rhs; 0 when both vanish, +inf when only rhs does

  NormEstimate y_running_sup;
  NormEstimate z_h2;
  NormEstimate ya_h2;
  NormEstimate k_terminal_sq;
  NormEstimate xi_l2;
  NormEstimate f0_h2;
  NormEstimate obstacle_sup;

  // The derivation needs β large enough that β/2 − 6 > 0; flag, never block.
  bool beta_low_warning = false;
};

/// Evaluate the estimate for a solution of the given problem.
EstimateReport lemma1_sides(const SolutionTriple& sol, const ProblemSpec& problem,
                            const PathSample& paths);

struct SuiteRatios {
  double max_ratio = 0.0;                     // over problems with rhs > 0
  std::vector<double> ratios;                 // per problem, NaN where rhs = 0
  std::vector<std::size_t> zero_rhs_indices;  // excluded from max_ratio
  std::vector<EstimateReport> reports;
};

/// Solve every problem at the shared β and aggregate the ratios: the
/// computable shadow of "one constant works across the suite". Paths are
/// exhaustive for N ≤ 12, seeded samples otherwise. Rejects an empty suite.
SuiteRatios lemma1_ratio_suite(const std::vector<ProblemSpec>& problems, double beta,
                               const PicardConfig& config = {});

}  // namespace rbsde
