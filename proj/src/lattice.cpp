#include "rbsde/lattice.hpp"

#include <stdexcept>

#include "rbsde/kernels.hpp"

namespace rbsde {

std::vector<double> conditional_expectation_step(std::span<const double> next_slice) {
  if (next_slice.size() < 2) {
    throw std::invalid_argument("conditional expectation step needs a slice of length >= 2");
  }
  std::vector<double> out(next_slice.size() - 1);
  kernels::active_ops().cond_exp_step(next_slice.data(), out.data(), out.size());
  return out;
}

LatticeProcess forward_node_probabilities(const TimeGrid& grid) {
  LatticeProcess p(grid);
  p.at(0, 0) = 1.0;
  // Zero-padding both ends of slice i turns the forward propagation
  // out[j] = 0.5*(in[j-1] + in[j]) into the same stencil as the backward step.
  std::vector<double> padded;
  for (int i = 0; i < grid.steps; ++i) {
    padded.assign(static_cast<std::size_t>(i) + 3, 0.0);
    auto src = p.slice(i);
    for (int j = 0; j <= i; ++j) {
      padded[static_cast<std::size_t>(j) + 1] = src[j];
    }
    auto dst = p.slice(i + 1);
    kernels::active_ops().cond_exp_step(padded.data(), dst.data(), dst.size());
  }
  return p;
}

double lattice_root_expectation(const LatticeProcess& process) {
  const int n = process.steps();
  std::vector<double> cur(process.slice(n).begin(), process.slice(n).end());
  std::vector<double> next;
  for (int i = n; i > 0; --i) {
    next.resize(static_cast<std::size_t>(i));
    kernels::active_ops().cond_exp_step(cur.data(), next.data(), next.size());
    cur.swap(next);
  }
  return cur[0];
}

}  // namespace rbsde
