#pragma once

#include <cstdint>
#include <exception>
#include <vector>

#include <omp.h>

namespace dioph {

// out[i] = fn(i) for i < count. Each slot is written by exactly one thread,
// so the result does not depend on the schedule. workers <= 0 uses the
// OpenMP default. The first exception thrown by fn is rethrown.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::uint64_t count, int workers, Fn&& fn) {
  std::vector<T> out(count);
  std::exception_ptr error;
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[i] = fn(static_cast<std::uint64_t>(i));
    } catch (...) {
#pragma omp critical(dioph_parallel_map_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

// Reference loop for tests and benchmarks.
template <typename T, typename Fn>
std::vector<T> serial_map(std::uint64_t count, Fn&& fn) {
  std::vector<T> out(count);
  for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

}  // namespace dioph
