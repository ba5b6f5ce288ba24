#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbsde/time_grid.hpp"

namespace rbsde {

/// An adapted real process carried on the recombining binomial lattice:
/// slice i holds i + 1 values, one per node (i, j).
class LatticeProcess {
 public:
  LatticeProcess() = default;
  explicit LatticeProcess(const TimeGrid& grid)
      : grid_(grid), values_(total_nodes(grid.steps), 0.0) {}

  /// Fill every node from an evaluator of (t, w).
  template <typename F>
  static LatticeProcess bake(const TimeGrid& grid, F&& f) {
    LatticeProcess p(grid);
    for (int i = 0; i <= grid.steps; ++i) {
      const double t = grid.time(i);
      auto s = p.slice(i);
      for (int j = 0; j <= i; ++j) {
        s[j] = f(t, brownian_value(grid, i, j));
      }
    }
    return p;
  }

  std::span<double> slice(int i) {
    return {values_.data() + offset(i), static_cast<std::size_t>(i) + 1};
  }
  std::span<const double> slice(int i) const {
    return {values_.data() + offset(i), static_cast<std::size_t>(i) + 1};
  }

  double at(int i, int j) const { return values_[offset(i) + j]; }
  double& at(int i, int j) { return values_[offset(i) + j]; }

  int steps() const { return grid_.steps; }
  const TimeGrid& grid() const { return grid_; }

  std::span<const double> raw() const { return values_; }
  std::span<double> raw() { return values_; }

  static std::size_t total_nodes(int steps) {
    return static_cast<std::size_t>(steps + 1) * (steps + 2) / 2;
  }

 private:
  static std::size_t offset(int i) {
    return static_cast<std::size_t>(i) * (i + 1) / 2;
  }

  TimeGrid grid_{};
  std::vector<double> values_;
};

/// One backward step of the discrete conditional expectation under the
/// symmetric two-point measure: entry j of the result is the mean of entries
/// j and j + 1 of the next slice. Rejects slices shorter than 2.
std::vector<double> conditional_expectation_step(std::span<const double> next_slice);

/// Node probabilities P(state at i is (i, j)) under fair up/down moves,
/// propagated forward slice by slice (the adjoint of the step above).
LatticeProcess forward_node_probabilities(const TimeGrid& grid);

/// Expectation at the root of the terminal slice, by repeated conditional
/// expectation steps.
double lattice_root_expectation(const LatticeProcess& process);

}  // namespace rbsde
