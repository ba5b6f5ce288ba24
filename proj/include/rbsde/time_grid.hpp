#pragma once

namespace rbsde {

/// Uniform partition of [0, T] into N steps of length dt = T / N.
struct TimeGrid {
  double horizon = 0.0;  // T
  int steps = 0;         // N
  double dt = 0.0;
  double sqrt_dt = 0.0;

  /// t_i; the terminal index returns the horizon exactly.
  double time(int i) const { return i == steps ? horizon : dt * i; }

  bool same_as(const TimeGrid& other) const {
    return horizon == other.horizon && steps == other.steps;
  }
};

/// Node (i, j) of the recombining binomial lattice: j of the first i moves
/// were "up". The Brownian value (2j - i) * sqrt(dt) is derived, never stored
/// independently.
struct LatticeNode {
  int time_index = 0;
  int up_count = 0;
  double brownian_value = 0.0;
};

/// Validated constructor; rejects horizon <= 0 and steps < 1.
TimeGrid build_time_grid(double horizon, int steps);

double brownian_value(const TimeGrid& grid, int i, int j);
LatticeNode make_node(const TimeGrid& grid, int i, int j);

}  // namespace rbsde
