// AVX2 kernel variants. This TU alone is built with -mavx2; entry is gated
// by the runtime dispatcher, so no AVX2 instruction executes on CPUs
// without it. Elementwise ops use mul+add (two roundings) to stay
// bit-identical with the scalar reference.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace homog::kernels::avx2 {

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double r = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) r += x[i];
  return r;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double r = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

double max_abs(const double* x, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, m);
  double r = std::max(std::max(lane[0], lane[1]), std::max(lane[2], lane[3]));
  for (; i < n; ++i) r = std::max(r, std::fabs(x[i]));
  return r;
}

void axpy(double* dst, const double* x, const double* y, double alpha, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(x + i),
                                            _mm256_mul_pd(a, _mm256_loadu_pd(y + i))));
  for (; i < n; ++i) dst[i] = x[i] + alpha * y[i];
}

void scale(double* dst, const double* x, double alpha, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(a, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) dst[i] = alpha * x[i];
}

} // namespace homog::kernels::avx2

#endif
