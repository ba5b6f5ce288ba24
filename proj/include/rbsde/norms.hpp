#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "rbsde/lattice.hpp"
#include "rbsde/paths.hpp"

namespace rbsde {

/// The squared-integrable weight a² baked onto the lattice, carrying the flag
/// that decides between exact lattice summation and path sampling.
/// `deterministic` must only be set when every slice is constant in the
/// Brownian state.
struct WeightField {
  LatticeProcess a_squared;
  bool deterministic = false;
};

/// Result of a norm computation. `exact` marks values free of sampling error
/// (lattice summation or exhaustive path enumeration); `std_error` is the
/// Monte Carlo standard error, 0 when exact.
struct NormEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
};

/// Cumulative weight A along one path: A[0] = 0 and
/// A[i+1] = A[i] + a²(node_i)·dt (left-endpoint rule).
std::vector<double> cumulative_weight(const WeightField& weight,
                                      const LatticePath& path);

/// The deterministic profile A[i], valid only when weight.deterministic.
std::vector<double> deterministic_weight_profile(const WeightField& weight);

/// E[Σ_{i<N} e^{βA_i}·ψ_i²·dt]. Exact lattice summation when the weight is
/// deterministic, path average otherwise. Rejects an empty path set.
NormEstimate weighted_h2_norm(const LatticeProcess& psi, const WeightField& weight,
                              double beta, const PathSample& paths);

/// E[Σ_{i<N} e^{βA_i}·(m_i·ψ_i² + φ_i²)·dt] with m = weight.a_squared; the
/// squared norm of a (Y, Z) pair. φ may be null (treated as 0).
NormEstimate weighted_pair_norm(const LatticeProcess& psi, const LatticeProcess* phi,
                                const WeightField& weight, double beta,
                                const PathSample& paths);

/// E[e^{βA_N}·sup_{i≤N} ψ_i²]. The sup is pathwise, so this is always a path
/// average; exhaustive samples make it exact.
NormEstimate weighted_s2_norm(const LatticeProcess& psi, const WeightField& weight,
                              double beta, const PathSample& paths);

/// E[sup_{i≤N} e^{βA_i}·ψ_i²], the running-supremum variant.
NormEstimate weighted_running_sup_norm(const LatticeProcess& psi,
                                       const WeightField& weight, double beta,
                                       const PathSample& paths);

/// E[e^{βA_N}·ψ_N²] for a terminal slice of N+1 values. Exact when the
/// weight is deterministic.
NormEstimate terminal_weighted_l2(std::span<const double> terminal,
                                  const WeightField& weight, double beta,
                                  const PathSample& paths);

/// Path average of an arbitrary functional, with standard error. Exhaustive
/// samples carry equal weight 2^{-N} and make the average exact.
template <typename F>
NormEstimate pathwise_expectation(const PathSample& sample, F&& per_path) {
  if (sample.paths.empty()) {
    throw std::invalid_argument("pathwise expectation needs at least one path");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& path : sample.paths) {
    const double v = per_path(path);
    sum += v;
    sum_sq += v * v;
  }
  const double m = static_cast<double>(sample.paths.size());
  NormEstimate est;
  est.value = sum / m;
  est.exact = sample.exhaustive;
  if (!sample.exhaustive && sample.paths.size() > 1) {
    const double var = (sum_sq - sum * sum / m) / (m - 1.0);
    est.std_error = var > 0.0 ? std::sqrt(var / m) : 0.0;
  }
  return est;
}

}  // namespace rbsde
