#pragma once

#include <cstddef>
#include <functional>

namespace forgetcurate::runtime {

// Thread cap from FORGETCURATE_THREADS (0 or unset = hardware concurrency).
std::size_t max_threads();

// Static chunking over [0, n). Each worker receives a disjoint [begin, end)
// range, so writes to per-index slots are race-free and results do not depend
// on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace forgetcurate::runtime
