#include "rbsde/driver.hpp"

#include <stdexcept>

namespace rbsde {

WeightField weight_field(const DriverSpec& driver, const TimeGrid& grid) {
  WeightField field;
  field.a_squared = LatticeProcess::bake(
      grid, [&](double t, double w) { return driver.a_squared(t, w); });
  field.deterministic = driver.deterministic_coefficients();
  return field;
}

std::vector<double> cumulative_A(const LatticePath& path, const DriverSpec& driver,
                                 const TimeGrid& grid) {
  if (path.steps() != grid.steps) {
    throw std::invalid_argument("cumulative_A: path/grid step mismatch");
  }
  std::vector<double> a(static_cast<std::size_t>(grid.steps) + 1, 0.0);
  for (int i = 0; i < grid.steps; ++i) {
    const double t = grid.time(i);
    const double w = brownian_value(grid, i, path.up_counts[i]);
    a[i + 1] = a[i] + driver.a_squared(t, w) * grid.dt;
  }
  return a;
}

ProblemSpec scale_problem(const ProblemSpec& problem, double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("scale_problem: lambda must be positive");
  }
  ProblemSpec scaled = problem;
  scaled.terminal = [xi = problem.terminal, lambda](double w) {
    return lambda * xi(w);
  };
  scaled.obstacle = [s = problem.obstacle, lambda](double t, double w) {
    return lambda * s(t, w);
  };
  // Conjugation keeps the Lipschitz data intact and maps the solution
  // (Y, Z, K) to (λY, λZ, λK).
  scaled.driver.f = [f = problem.driver.f, lambda](double t, double w, double y,
                                                   double z) {
    return lambda * f(t, w, y / lambda, z / lambda);
  };
  return scaled;
}

}  // namespace rbsde
