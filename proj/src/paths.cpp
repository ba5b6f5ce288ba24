#include "rbsde/paths.hpp"

#include <random>
#include <stdexcept>

namespace rbsde {

PathSample sample_lattice_paths(const TimeGrid& grid, std::size_t count,
                                std::uint64_t seed) {
  if (count < 1) {
    throw std::invalid_argument("path sample needs at least one path");
  }
  // Raw engine bits, not a distribution: std::bernoulli_distribution is
  // implementation defined, the mt19937_64 stream is not.
  std::mt19937_64 engine(seed);
  PathSample sample;
  sample.grid = grid;
  sample.paths.resize(count);
  for (auto& path : sample.paths) {
    path.up_counts.resize(static_cast<std::size_t>(grid.steps) + 1);
    path.up_counts[0] = 0;
    for (int k = 0; k < grid.steps; ++k) {
      const int up = static_cast<int>(engine() >> 63);
      path.up_counts[k + 1] = path.up_counts[k] + up;
    }
  }
  return sample;
}

PathSample all_lattice_paths(const TimeGrid& grid) {
  if (grid.steps > 20) {
    throw std::invalid_argument("exhaustive enumeration is limited to 20 steps");
  }
  const std::size_t count = std::size_t{1} << grid.steps;
  PathSample sample;
  sample.grid = grid;
  sample.exhaustive = true;
  sample.paths.resize(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    auto& path = sample.paths[mask];
    path.up_counts.resize(static_cast<std::size_t>(grid.steps) + 1);
    path.up_counts[0] = 0;
    for (int k = 0; k < grid.steps; ++k) {
      path.up_counts[k + 1] = path.up_counts[k] + static_cast<int>((mask >> k) & 1);
    }
  }
  return sample;
}

}  // namespace rbsde
