#include "forgetcurate/runtime.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace forgetcurate::runtime {

std::size_t max_threads() {
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const char* env = std::getenv("FORGETCURATE_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || v < 0) return hw;
  if (v == 0) return hw;
  return static_cast<std::size_t>(v);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  std::size_t workers = max_threads();
  if (workers > n) workers = n;
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    if (begin >= n) break;
    const std::size_t end = begin + chunk < n ? begin + chunk : n;
    threads.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace forgetcurate::runtime
