#include "forgetcurate/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <limits>

#include "forgetcurate/errors.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <cpuid.h>
#endif

namespace forgetcurate::kernels {

namespace detail {

// Scalar reference kernels. These define the semantics; the SIMD variants in
// kernels_avx2.cpp / kernels_neon.cpp must agree with them up to floating
// point reassociation.

void axpy_scalar(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(std::span<double> x, double a) {
  for (double& v : x) v *= a;
}

double dot_scalar(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_scalar(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

double max_scalar(std::span<const double> x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x) m = v > m ? v : m;
  return m;
}

}  // namespace detail

#if defined(FORGETCURATE_HAVE_AVX2)
namespace detail {
void axpy_avx2(double a, std::span<const double> x, std::span<double> y);
void scale_avx2(std::span<double> x, double a);
double dot_avx2(std::span<const double> x, std::span<const double> y);
double sum_avx2(std::span<const double> x);
double max_avx2(std::span<const double> x);
}  // namespace detail
#endif

#if defined(FORGETCURATE_HAVE_NEON)
namespace detail {
void axpy_neon(double a, std::span<const double> x, std::span<double> y);
void scale_neon(std::span<double> x, double a);
double dot_neon(std::span<const double> x, std::span<const double> y);
double sum_neon(std::span<const double> x);
double max_neon(std::span<const double> x);
}  // namespace detail
#endif

namespace {

struct Dispatch {
  Backend backend;
  void (*axpy)(double, std::span<const double>, std::span<double>);
  void (*scale)(std::span<double>, double);
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*sum)(std::span<const double>);
  double (*max_value)(std::span<const double>);
};

constexpr Dispatch kScalarDispatch = {
    Backend::scalar,     detail::axpy_scalar, detail::scale_scalar,
    detail::dot_scalar,  detail::sum_scalar,  detail::max_scalar,
};

bool cpu_has_avx2() {
#if defined(FORGETCURATE_HAVE_AVX2)
  unsigned int eax = 0, ebx = 0, ecx = 0, edx = 0;
  if (__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) {
    return (ebx & (1u << 5)) != 0;
  }
  return false;
#else
  return false;
#endif
}

bool cpu_has_neon() {
#if defined(FORGETCURATE_HAVE_NEON)
  return true;  // NEON is baseline on aarch64
#else
  return false;
#endif
}

Dispatch make_dispatch(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return kScalarDispatch;
    case Backend::avx2:
#if defined(FORGETCURATE_HAVE_AVX2)
      return Dispatch{Backend::avx2,      detail::axpy_avx2, detail::scale_avx2,
                      detail::dot_avx2,   detail::sum_avx2,  detail::max_avx2};
#else
      break;
#endif
    case Backend::neon:
#if defined(FORGETCURATE_HAVE_NEON)
      return Dispatch{Backend::neon,      detail::axpy_neon, detail::scale_neon,
                      detail::dot_neon,   detail::sum_neon,  detail::max_neon};
#else
      break;
#endif
  }
  fail(ErrorKind::parameter_error,
       std::string("kernel backend not supported on this CPU: ") + backend_name(backend));
}

Backend detect_backend() {
  if (const char* env = std::getenv("FORGETCURATE_KERNEL")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0) return Backend::avx2;
    if (std::strcmp(env, "neon") == 0) return Backend::neon;
    // anything else (including "auto") falls through to detection
  }
  if (cpu_has_avx2()) return Backend::avx2;
  if (cpu_has_neon()) return Backend::neon;
  return Backend::scalar;
}

Dispatch& dispatch() {
  static Dispatch d = make_dispatch(detect_backend());
  return d;
}

}  // namespace

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

Backend active_backend() { return dispatch().backend; }

void force_backend(Backend backend) {
  if (backend == Backend::avx2 && !cpu_has_avx2())
    fail(ErrorKind::parameter_error, "avx2 not available on this CPU");
  if (backend == Backend::neon && !cpu_has_neon())
    fail(ErrorKind::parameter_error, "neon not available on this CPU");
  dispatch() = make_dispatch(backend);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  dispatch().axpy(a, x, y);
}

void scale(std::span<double> x, double a) { dispatch().scale(x, a); }

double dot(std::span<const double> x, std::span<const double> y) {
  return dispatch().dot(x, y);
}

double sum(std::span<const double> x) { return dispatch().sum(x); }

double max_value(std::span<const double> x) { return dispatch().max_value(x); }

}  // namespace forgetcurate::kernels
