#pragma once

#include <cstddef>
#include <vector>

namespace rbsde::kernels {

/// Data-parallel inner loops of the lattice solver, provided as a scalar
/// reference implementation plus SIMD variants selected at runtime.
///
/// Every backend must produce results that are bit-identical to
/// `scalar_ops()`:
///   - element-wise kernels apply the same per-element operation sequence
///     (no reassociation, no FMA contraction; the build sets
///     -ffp-contract=off so the scalar reference cannot fuse either);
///   - reductions accumulate in a fixed four-lane order: four accumulators
///     `acc[l]`, main loop `acc[l] += term(4*k + l)`, tail elements `m`
///     folded into `acc[m % 4]`, final combine `(acc[0] + acc[2]) +
///     (acc[1] + acc[3])`.
/// Equivalence is enforced by tests that compare every available backend
/// against the scalar reference on randomized inputs.
struct Ops {
  const char* name;

  /// out[j] = 0.5 * (next[j] + next[j + 1]) for j in [0, n).
  /// `next` has n + 1 entries; no aliasing between next and out.
  void (*cond_exp_step)(const double* next, double* out, std::size_t n);

  /// Fused backward step of the reflected dynamic program. For j in [0, n):
  ///   c     = 0.5 * (next[j] + next[j + 1]) + g[j] * dt
  ///   y[j]  = obstacle[j] > c ? obstacle[j] : c
  ///   dk[j] = y[j] - c
  ///   z[j]  = (next[j + 1] - next[j]) * inv_two_sqrt_dt
  /// Inputs must be finite for the backends to agree bitwise.
  void (*snell_step)(const double* next, const double* g, const double* obstacle,
                     double dt, double inv_two_sqrt_dt,
                     double* y, double* z, double* dk, std::size_t n);

  /// Sum of w[i] * (v[i] * v[i]) in the fixed four-lane order.
  double (*weighted_sumsq)(const double* w, const double* v, std::size_t n);

  /// Sum of a[i] * b[i] in the fixed four-lane order.
  double (*dot)(const double* a, const double* b, std::size_t n);

  /// Sum of w[i] * (a[i] * b[i]) in the fixed four-lane order.
  double (*weighted_dot)(const double* w, const double* a, const double* b,
                         std::size_t n);
};

const Ops& scalar_ops();

#if defined(RBSDE_HAVE_AVX2)
const Ops& avx2_ops();
#endif

/// True when the running CPU can execute the AVX2 backend.
bool avx2_supported();

/// Backend used by the library. Selection happens once: the environment
/// variable RBSDE_KERNELS (values "scalar" or "avx2") overrides, otherwise
/// the widest backend supported by the CPU wins.
const Ops& active_ops();

/// All backends usable on this machine, scalar first.
std::vector<const Ops*> available_backends();

}  // namespace rbsde::kernels
