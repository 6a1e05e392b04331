#pragma once

#include <exception>
#include <mutex>

namespace cpsg::detail {

// Runs body(k) for k in [0, n) across OpenMP threads. The first exception
// thrown by any iteration is rethrown on the calling thread.
template <typename Body>
void parallel_for(int n, Body&& body) {
  std::exception_ptr error;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n; ++k) {
    try {
      body(k);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

template <typename Body>
void serial_for(int n, Body&& body) {
  for (int k = 0; k < n; ++k) body(k);
}

}  // namespace cpsg::detail
