#pragma once

#include <cstddef>
#include <span>

namespace forgetcurate::kernels {

// Dense double-precision primitives behind the trainer and the metric
// reductions. A scalar reference implementation always exists; on x86-64 an
// AVX2 variant and on aarch64 a NEON variant are selected at runtime.
// Reductions use a fixed lane/blocking order, so every backend is
// deterministic run to run; backends may differ from each other in the last
// ulps because partial sums associate differently (equivalence tests bound
// the gap).
enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend backend);

// Backend in use. Resolved once: FORGETCURATE_KERNEL=scalar|avx2|neon|auto
// overrides auto-detection.
Backend active_backend();

// Test hook. Throws Error(parameter_error) if the backend is not supported
// on this CPU.
void force_backend(Backend backend);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

// x *= a
void scale(std::span<double> x, double a);

double dot(std::span<const double> x, std::span<const double> y);

double sum(std::span<const double> x);

double max_value(std::span<const double> x);

}  // namespace forgetcurate::kernels
