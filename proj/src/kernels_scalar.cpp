#include "rbsde/kernels.hpp"

namespace rbsde::kernels {
namespace {

void cond_exp_step_scalar(const double* next, double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = 0.5 * (next[j] + next[j + 1]);
  }
}

void snell_step_scalar(const double* next, const double* g, const double* obstacle,
                       double dt, double inv_two_sqrt_dt,
                       double* y, double* z, double* dk, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double down = next[j];
    const double up = next[j + 1];
    const double c = 0.5 * (down + up) + g[j] * dt;
    const double s = obstacle[j];
    // Ternary (not std::max) so the tie/NaN behaviour matches vmaxpd exactly.
    const double yv = s > c ? s : c;
    y[j] = yv;
    dk[j] = yv - c;
    z[j] = (up - down) * inv_two_sqrt_dt;
  }
}

// The three reductions below spell out the canonical four-lane order; the
// SIMD backends reproduce it lane for lane.
double weighted_sumsq_scalar(const double* w, const double* v, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t main = n - n % 4;
  for (std::size_t i = 0; i < main; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      acc[l] += w[i + l] * (v[i + l] * v[i + l]);
    }
  }
  for (std::size_t m = main; m < n; ++m) {
    acc[m % 4] += w[m] * (v[m] * v[m]);
  }
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t main = n - n % 4;
  for (std::size_t i = 0; i < main; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      acc[l] += a[i + l] * b[i + l];
    }
  }
  for (std::size_t m = main; m < n; ++m) {
    acc[m % 4] += a[m] * b[m];
  }
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double weighted_dot_scalar(const double* w, const double* a, const double* b,
                           std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t main = n - n % 4;
  for (std::size_t i = 0; i < main; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      acc[l] += w[i + l] * (a[i + l] * b[i + l]);
    }
  }
  for (std::size_t m = main; m < n; ++m) {
    acc[m % 4] += w[m] * (a[m] * b[m]);
  }
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{
      "scalar",
      cond_exp_step_scalar,
      snell_step_scalar,
      weighted_sumsq_scalar,
      dot_scalar,
      weighted_dot_scalar,
  };
  return ops;
}

}  // namespace rbsde::kernels
