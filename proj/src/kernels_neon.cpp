// NEON variants (aarch64 float64x2). Same contract as kernels_avx2.cpp:
// fixed lane order, reproducible run to run.

#include <span>

#if defined(FORGETCURATE_HAVE_NEON)

#include <arm_neon.h>

#include <limits>

namespace forgetcurate::kernels::detail {

void axpy_neon(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vx = vld1q_f64(x.data() + i);
    float64x2_t vy = vld1q_f64(y.data() + i);
    vy = vaddq_f64(vy, vmulq_f64(va, vx));
    vst1q_f64(y.data() + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_neon(std::span<double> x, double a) {
  const std::size_t n = x.size();
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x.data() + i, vmulq_f64(vld1q_f64(x.data() + i), va));
  }
  for (; i < n; ++i) x[i] *= a;
}

double dot_neon(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x.data() + i), vld1q_f64(y.data() + i)));
  }
  double result = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) result += x[i] * y[i];
  return result;
}

double sum_neon(std::span<const double> x) {
  const std::size_t n = x.size();
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vld1q_f64(x.data() + i));
  }
  double result = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) result += x[i];
  return result;
}

double max_neon(std::span<const double> x) {
  const std::size_t n = x.size();
  double m = -std::numeric_limits<double>::infinity();
  float64x2_t acc = vdupq_n_f64(m);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vmaxq_f64(acc, vld1q_f64(x.data() + i));
  }
  if (i > 0) {
    double a0 = vgetq_lane_f64(acc, 0);
    double a1 = vgetq_lane_f64(acc, 1);
    m = a0 > m ? a0 : m;
    m = a1 > m ? a1 : m;
  }
  for (; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

}  // namespace forgetcurate::kernels::detail

#endif  // FORGETCURATE_HAVE_NEON
