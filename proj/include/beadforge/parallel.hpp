#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace beadforge {

// Calls f(i) for i in [0, count) on up to `jobs` OpenMP threads and returns
// the results in index order. f must derive its randomness from i alone.
// The first exception (lowest index) is rethrown after the loop.
template <class R, class F>
std::vector<R> replicate(std::size_t count, int jobs, F&& f) {
  std::vector<R> out(count);
  std::vector<std::exception_ptr> err(count);
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic) num_threads(jobs < 1 ? 1 : jobs)
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = f(static_cast<std::size_t>(i));
    } catch (...) {
      err[i] = std::current_exception();
    }
  }
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return out;
}

// Serial reference for replicate().
template <class R, class F>
std::vector<R> replicate_serial(std::size_t count, F&& f) {
  std::vector<R> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(f(i));
  return out;
}

}  // namespace beadforge
