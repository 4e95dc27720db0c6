// AVX2 variants of the dense kernels. Compiled with -mavx2 for this file
// only; kernels.cpp calls in here only after a cpuid check. Reductions keep
// four independent lanes and combine them in a fixed order, so results are
// reproducible run to run even though they associate differently from the
// scalar reference.

#include <span>

#if defined(FORGETCURATE_HAVE_AVX2)

#include <immintrin.h>

#include <limits>

namespace forgetcurate::kernels::detail {

void axpy_avx2(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x.data() + i);
    __m256d vy = _mm256_loadu_pd(y.data() + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
    _mm256_storeu_pd(y.data() + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(std::span<double> x, double a) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x.data() + i);
    _mm256_storeu_pd(x.data() + i, _mm256_mul_pd(v, va));
  }
  for (; i < n; ++i) x[i] *= a;
}

namespace {

inline double hsum(__m256d v) {
  // (v0+v2) + (v1+v3) in a fixed order
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(s, s);
  return _mm_cvtsd_f64(_mm_add_sd(s, swapped));
}

}  // namespace

double dot_avx2(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x.data() + i);
    __m256d vy = _mm256_loadu_pd(y.data() + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(vx, vy));
  }
  double result = hsum(acc);
  for (; i < n; ++i) result += x[i] * y[i];
  return result;
}

double sum_avx2(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x.data() + i));
  }
  double result = hsum(acc);
  for (; i < n; ++i) result += x[i];
  return result;
}

double max_avx2(std::span<const double> x) {
  const std::size_t n = x.size();
  double m = -std::numeric_limits<double>::infinity();
  __m256d acc = _mm256_set1_pd(m);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_max_pd(acc, _mm256_loadu_pd(x.data() + i));
  }
  if (i > 0) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (double lane : lanes) m = lane > m ? lane : m;
  }
  for (; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

}  // namespace forgetcurate::kernels::detail

#endif  // FORGETCURATE_HAVE_AVX2
