#pragma once

#include <string>

#include "rbsde/driver.hpp"
#include "rbsde/time_grid.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
  return std::string(RBSDE_FIXTURES_DIR) + "/" + name;
}

/// Problem with constant data, used wherever the exact shape does not
/// matter: a² = mu, driver independent of (y, z).
inline rbsde::ProblemSpec constant_problem(double horizon, int steps, double mu,
                                           double beta, double g, double xi,
                                           double obstacle) {
  rbsde::ProblemSpec p;
  p.grid = rbsde::build_time_grid(horizon, steps);
  p.driver.f = [g](double, double, double, double) { return g; };
  p.driver.mu = rbsde::CoefficientProcess::constant(mu);
  p.driver.gamma = rbsde::CoefficientProcess::constant(0.0);
  p.driver.epsilon = mu;
  p.terminal = [xi](double) { return xi; };
  p.obstacle = [obstacle](double, double) { return obstacle; };
  p.beta = beta;
  return p;
}

}  // namespace testutil
