#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace sumrl {

/// Execution policy for the per-document kernels. The serial path is the
/// reference; the OpenMP path must produce bit-identical results.
enum class Exec { serial, parallel };

/// Calls fn(i) for i in [0, n). Each index writes only its own output slot,
/// so the result does not depend on scheduling. The first exception thrown
/// by any iteration is rethrown on the calling thread.
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace sumrl
