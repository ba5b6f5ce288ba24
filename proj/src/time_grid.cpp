#include "rbsde/time_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rbsde {

TimeGrid build_time_grid(double horizon, int steps) {
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("time grid horizon must be positive, got " +
                                std::to_string(horizon));
  }
  if (steps < 1) {
    throw std::invalid_argument("time grid needs at least one step, got " +
                                std::to_string(steps));
  }
  TimeGrid grid;
  grid.horizon = horizon;
  grid.steps = steps;
  grid.dt = horizon / steps;
  grid.sqrt_dt = std::sqrt(grid.dt);
  return grid;
}

double brownian_value(const TimeGrid& grid, int i, int j) {
  const int k = 2 * j - i;
  return k == 0 ? 0.0 : k * grid.sqrt_dt;
}

LatticeNode make_node(const TimeGrid& grid, int i, int j) {
  return LatticeNode{i, j, brownian_value(grid, i, j)};
}

}  // namespace rbsde
