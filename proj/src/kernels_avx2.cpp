#include "rbsde/kernels.hpp"

#include <immintrin.h>

// AVX2 backend. Intrinsics only, no FMA: vfmadd rounds once where the scalar
// reference rounds twice, so mul+add keeps the two backends bit-identical.

namespace rbsde::kernels {
namespace {

void cond_exp_step_avx2(const double* next, double* out, std::size_t n) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d down = _mm256_loadu_pd(next + j);
    const __m256d up = _mm256_loadu_pd(next + j + 1);
    _mm256_storeu_pd(out + j, _mm256_mul_pd(half, _mm256_add_pd(down, up)));
  }
  for (; j < n; ++j) {
    out[j] = 0.5 * (next[j] + next[j + 1]);
  }
}

void snell_step_avx2(const double* next, const double* g, const double* obstacle,
                     double dt, double inv_two_sqrt_dt,
                     double* y, double* z, double* dk, std::size_t n) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d dtv = _mm256_set1_pd(dt);
  const __m256d zv = _mm256_set1_pd(inv_two_sqrt_dt);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d down = _mm256_loadu_pd(next + j);
    const __m256d up = _mm256_loadu_pd(next + j + 1);
    const __m256d gv = _mm256_loadu_pd(g + j);
    const __m256d sv = _mm256_loadu_pd(obstacle + j);
    const __m256d c = _mm256_add_pd(_mm256_mul_pd(half, _mm256_add_pd(down, up)),
                                    _mm256_mul_pd(gv, dtv));
    // vmaxpd(s, c): s when s > c, else c, the same tie rule as the scalar ternary.
    const __m256d yv = _mm256_max_pd(sv, c);
    _mm256_storeu_pd(y + j, yv);
    _mm256_storeu_pd(dk + j, _mm256_sub_pd(yv, c));
    _mm256_storeu_pd(z + j, _mm256_mul_pd(_mm256_sub_pd(up, down), zv));
  }
  for (; j < n; ++j) {
    const double down = next[j];
    const double up = next[j + 1];
    const double c = 0.5 * (down + up) + g[j] * dt;
    const double s = obstacle[j];
    const double yv = s > c ? s : c;
    y[j] = yv;
    dk[j] = yv - c;
    z[j] = (up - down) * inv_two_sqrt_dt;
  }
}

double weighted_sumsq_avx2(const double* w, const double* v, std::size_t n) {
  __m256d accv = _mm256_setzero_pd();
  const std::size_t main = n - n % 4;
  for (std::size_t i = 0; i < main; i += 4) {
    const __m256d wv = _mm256_loadu_pd(w + i);
    const __m256d vv = _mm256_loadu_pd(v + i);
    accv = _mm256_add_pd(accv, _mm256_mul_pd(wv, _mm256_mul_pd(vv, vv)));
  }
  alignas(32) double acc[4];
  _mm256_store_pd(acc, accv);
  for (std::size_t m = main; m < n; ++m) {
    acc[m % 4] += w[m] * (v[m] * v[m]);
  }
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d accv = _mm256_setzero_pd();
  const std::size_t main = n - n % 4;
  for (std::size_t i = 0; i < main; i += 4) {
    accv = _mm256_add_pd(accv, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                             _mm256_loadu_pd(b + i)));
  }
  alignas(32) double acc[4];
  _mm256_store_pd(acc, accv);
  for (std::size_t m = main; m < n; ++m) {
    acc[m % 4] += a[m] * b[m];
  }
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

double weighted_dot_avx2(const double* w, const double* a, const double* b,
                         std::size_t n) {
  __m256d accv = _mm256_setzero_pd();
  const std::size_t main = n - n % 4;
  for (std::size_t i = 0; i < main; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                       _mm256_loadu_pd(b + i));
    accv = _mm256_add_pd(accv, _mm256_mul_pd(_mm256_loadu_pd(w + i), prod));
  }
  alignas(32) double acc[4];
  _mm256_store_pd(acc, accv);
  for (std::size_t m = main; m < n; ++m) {
    acc[m % 4] += w[m] * (a[m] * b[m]);
  }
  return (acc[0] + acc[2]) + (acc[1] + acc[3]);
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{
      "avx2",
      cond_exp_step_avx2,
      snell_step_avx2,
      weighted_sumsq_avx2,
      dot_avx2,
      weighted_dot_avx2,
  };
  return ops;
}

}  // namespace rbsde::kernels
