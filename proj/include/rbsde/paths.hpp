#pragma once

#include <cstdint>
#include <vector>

#include "rbsde/lattice.hpp"
#include "rbsde/time_grid.hpp"

namespace rbsde {

/// One realisation of the fair up/down walk. Only the running up counts are
/// stored; move k is recovered as the increment between indices k and k + 1.
struct LatticePath {
  std::vector<int> up_counts;  // length steps + 1, up_counts[0] == 0

  int steps() const { return static_cast<int>(up_counts.size()) - 1; }
  int up_count(int i) const { return up_counts[i]; }
  bool up_move(int k) const { return up_counts[k + 1] > up_counts[k]; }
};

/// A set of paths over one grid, all carrying equal probability weight.
/// `exhaustive` marks the full 2^N enumeration, which turns path averages
/// into exact expectations.
struct PathSample {
  TimeGrid grid;
  std::vector<LatticePath> paths;
  bool exhaustive = false;
};

/// M independent paths of fair moves. The draw consumes one engine output
/// per move (top bit decides), so identical seeds reproduce identical paths
/// on any conforming platform.
PathSample sample_lattice_paths(const TimeGrid& grid, std::size_t count,
                                std::uint64_t seed);

/// All 2^N paths; bit k of the enumeration index is move k (1 = up).
/// Rejects steps > 20.
PathSample all_lattice_paths(const TimeGrid& grid);

/// Value of an adapted lattice process at time index i along a path.
inline double path_value(const LatticeProcess& process, const LatticePath& path,
                         int i) {
  return process.at(i, path.up_counts[i]);
}

}  // namespace rbsde
