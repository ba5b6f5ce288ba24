#include "rbsde/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rbsde/picard.hpp"

namespace rbsde {
namespace {

void require_valid(const AmericanPutSpec& spec) {
  if (!(spec.spot > 0.0) || !(spec.strike > 0.0) || !(spec.rate > 0.0) ||
      !(spec.sigma > 0.0) || !(spec.horizon > 0.0) || spec.steps < 1) {
    throw std::invalid_argument("american put spec: all parameters must be positive");
  }
}

double crr_put(const AmericanPutSpec& spec, bool american) {
  require_valid(spec);
  const double dt = spec.horizon / spec.steps;
  const double up = std::exp(spec.sigma * std::sqrt(dt));
  const double down = 1.0 / up;
  const double grow = std::exp(spec.rate * dt);
  const double q = (grow - down) / (up - down);
  if (!(q >= 0.0) || !(q <= 1.0)) {
    throw std::invalid_argument("american put spec: risk-neutral weight outside [0,1]");
  }
  const double disc = 1.0 / grow;

  const int n = spec.steps;
  std::vector<double> value(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const double price = spec.spot * std::pow(up, j) * std::pow(down, n - j);
    value[j] = std::max(spec.strike - price, 0.0);
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = 0; j <= i; ++j) {
      double v = disc * (q * value[j + 1] + (1.0 - q) * value[j]);
      if (american) {
        const double price = spec.spot * std::pow(up, j) * std::pow(down, i - j);
        v = std::max(spec.strike - price, v);
      }
      value[j] = v;
    }
  }
  return value[0];
}

}  // namespace

double linear_bsde_value(const std::function<double(double)>& rate, double xi_mean,
                         const TimeGrid& grid) {
  double integral = 0.0;
  for (int i = 0; i < grid.steps; ++i) {
    integral += rate(grid.time(i)) * grid.dt;
  }
  return std::exp(-integral) * xi_mean;
}

double crr_american_put(const AmericanPutSpec& spec) { return crr_put(spec, true); }

double crr_european_put(const AmericanPutSpec& spec) { return crr_put(spec, false); }

ProblemSpec rbsde_american_put_problem(const AmericanPutSpec& spec) {
  require_valid(spec);
  ProblemSpec problem;
  problem.grid = build_time_grid(spec.horizon, spec.steps);
  problem.beta = min_beta_for_factor(0.5);

  const double r = spec.rate;
  const double drift = r - 0.5 * spec.sigma * spec.sigma;
  const double s0 = spec.spot;
  const double strike = spec.strike;
  const double sigma = spec.sigma;
  const auto state = [s0, drift, sigma](double t, double w) {
    return s0 * std::exp(drift * t + sigma * w);
  };

  problem.driver.f = [r](double, double, double y, double) { return -r * y; };
  problem.driver.mu = CoefficientProcess::constant(r);
  problem.driver.gamma = CoefficientProcess::constant(0.0);
  problem.driver.epsilon = r;
  problem.obstacle = [state, strike](double t, double w) {
    return std::max(strike - state(t, w), 0.0);
  };
  const double horizon = spec.horizon;
  problem.terminal = [state, strike, horizon](double w) {
    return std::max(strike - state(horizon, w), 0.0);
  };
  return problem;
}

}  // namespace rbsde
