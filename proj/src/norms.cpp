#include "rbsde/norms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rbsde/kernels.hpp"

namespace rbsde {
namespace {

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* what) {
  if (!a.same_as(b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
  }
}

void require_paths(const PathSample& paths, const char* what) {
  if (paths.paths.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty path list");
  }
}

/// A_N along one path, left-endpoint rule, no intermediate storage.
double terminal_weight_along(const WeightField& weight, const LatticePath& path) {
  const TimeGrid& grid = weight.a_squared.grid();
  double a = 0.0;
  for (int i = 0; i < grid.steps; ++i) {
    a += weight.a_squared.at(i, path.up_counts[i]) * grid.dt;
  }
  return a;
}

/// Shared core of the H² norms: E[Σ_{i<N} e^{βA_i}(m_i ψ_i² + φ_i²) dt]
/// with m = a² when multiply_a, m = 1 otherwise, φ optional.
NormEstimate h2_core(const LatticeProcess& psi, const LatticeProcess* phi,
                     const WeightField& weight, double beta,
                     const PathSample& paths, bool multiply_a, const char* what) {
  const TimeGrid& grid = psi.grid();
  require_same_grid(grid, weight.a_squared.grid(), what);
  require_same_grid(grid, paths.grid, what);
  if (phi != nullptr) require_same_grid(grid, phi->grid(), what);
  require_paths(paths, what);

  const auto& ops = kernels::active_ops();
  if (weight.deterministic) {
    const auto profile = deterministic_weight_profile(weight);
    const LatticeProcess prob = forward_node_probabilities(grid);
    std::vector<double> scaled(static_cast<std::size_t>(grid.steps) + 1);
    double total = 0.0;
    for (int i = 0; i < grid.steps; ++i) {
      const std::size_t n = static_cast<std::size_t>(i) + 1;
      const double* w = prob.slice(i).data();
      double slice_sum;
      if (multiply_a) {
        for (std::size_t j = 0; j < n; ++j) {
          scaled[j] = w[j] * weight.a_squared.at(i, static_cast<int>(j));
        }
        slice_sum = ops.weighted_sumsq(scaled.data(), psi.slice(i).data(), n);
      } else {
        slice_sum = ops.weighted_sumsq(w, psi.slice(i).data(), n);
      }
      if (phi != nullptr) {
        slice_sum += ops.weighted_sumsq(w, phi->slice(i).data(), n);
      }
      total += std::exp(beta * profile[i]) * slice_sum * grid.dt;
    }
    return {total, 0.0, true};
  }

  return pathwise_expectation(paths, [&](const LatticePath& path) {
    double acc = 0.0;
    double a = 0.0;
    for (int i = 0; i < grid.steps; ++i) {
      const int j = path.up_counts[i];
      const double v = psi.at(i, j);
      double term = multiply_a ? weight.a_squared.at(i, j) * v * v : v * v;
      if (phi != nullptr) {
        const double u = phi->at(i, j);
        term += u * u;
      }
      acc += std::exp(beta * a) * term * grid.dt;
      a += weight.a_squared.at(i, j) * grid.dt;
    }
    return acc;
  });
}

}  // namespace

std::vector<double> cumulative_weight(const WeightField& weight,
                                      const LatticePath& path) {
  const TimeGrid& grid = weight.a_squared.grid();
  if (path.steps() != grid.steps) {
    throw std::invalid_argument("cumulative_weight: path/grid step mismatch");
  }
  std::vector<double> a(static_cast<std::size_t>(grid.steps) + 1, 0.0);
  for (int i = 0; i < grid.steps; ++i) {
    a[i + 1] = a[i] + weight.a_squared.at(i, path.up_counts[i]) * grid.dt;
  }
  return a;
}

std::vector<double> deterministic_weight_profile(const WeightField& weight) {
  if (!weight.deterministic) {
    throw std::logic_error("deterministic_weight_profile: weight is path dependent");
  }
  const TimeGrid& grid = weight.a_squared.grid();
  std::vector<double> a(static_cast<std::size_t>(grid.steps) + 1, 0.0);
  for (int i = 0; i < grid.steps; ++i) {
    a[i + 1] = a[i] + weight.a_squared.at(i, 0) * grid.dt;
  }
  return a;
}

NormEstimate weighted_h2_norm(const LatticeProcess& psi, const WeightField& weight,
                              double beta, const PathSample& paths) {
  return h2_core(psi, nullptr, weight, beta, paths, false, "weighted_h2_norm");
}

NormEstimate weighted_pair_norm(const LatticeProcess& psi, const LatticeProcess* phi,
                                const WeightField& weight, double beta,
                                const PathSample& paths) {
  return h2_core(psi, phi, weight, beta, paths, true, "weighted_pair_norm");
}

NormEstimate weighted_s2_norm(const LatticeProcess& psi, const WeightField& weight,
                              double beta, const PathSample& paths) {
  const TimeGrid& grid = psi.grid();
  require_same_grid(grid, weight.a_squared.grid(), "weighted_s2_norm");
  require_same_grid(grid, paths.grid, "weighted_s2_norm");
  require_paths(paths, "weighted_s2_norm");
  return pathwise_expectation(paths, [&](const LatticePath& path) {
    double sup = 0.0;
    for (int i = 0; i <= grid.steps; ++i) {
      const double v = psi.at(i, path.up_counts[i]);
      if (v * v > sup) sup = v * v;
    }
    return std::exp(beta * terminal_weight_along(weight, path)) * sup;
  });
}

NormEstimate weighted_running_sup_norm(const LatticeProcess& psi,
                                       const WeightField& weight, double beta,
                                       const PathSample& paths) {
  const TimeGrid& grid = psi.grid();
  require_same_grid(grid, weight.a_squared.grid(), "weighted_running_sup_norm");
  require_same_grid(grid, paths.grid, "weighted_running_sup_norm");
  require_paths(paths, "weighted_running_sup_norm");
  return pathwise_expectation(paths, [&](const LatticePath& path) {
    double sup = 0.0;
    double a = 0.0;
    for (int i = 0; i <= grid.steps; ++i) {
      const int j = path.up_counts[i];
      const double v = psi.at(i, j);
      const double term = std::exp(beta * a) * v * v;
      if (term > sup) sup = term;
      if (i < grid.steps) a += weight.a_squared.at(i, j) * grid.dt;
    }
    return sup;
  });
}

NormEstimate terminal_weighted_l2(std::span<const double> terminal,
                                  const WeightField& weight, double beta,
                                  const PathSample& paths) {
  const TimeGrid& grid = weight.a_squared.grid();
  require_same_grid(grid, paths.grid, "terminal_weighted_l2");
  require_paths(paths, "terminal_weighted_l2");
  if (terminal.size() != static_cast<std::size_t>(grid.steps) + 1) {
    throw std::invalid_argument("terminal_weighted_l2: slice length mismatch");
  }

  if (weight.deterministic) {
    const auto profile = deterministic_weight_profile(weight);
    const LatticeProcess prob = forward_node_probabilities(grid);
    const double sum = kernels::active_ops().weighted_sumsq(
        prob.slice(grid.steps).data(), terminal.data(), terminal.size());
    return {std::exp(beta * profile[grid.steps]) * sum, 0.0, true};
  }

  return pathwise_expectation(paths, [&](const LatticePath& path) {
    const double v = terminal[path.up_counts[grid.steps]];
    return std::exp(beta * terminal_weight_along(weight, path)) * v * v;
  });
}

}  // namespace rbsde
