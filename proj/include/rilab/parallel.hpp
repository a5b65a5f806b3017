#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rilab {

/// How an ensemble of independent runs is executed. Both policies produce the
/// same per-index results; the serial one is kept as the reference the OpenMP
/// kernel is tested against.
enum class Execution { serial, parallel };

inline Execution execution_for(int workers) { return workers > 1 ? Execution::parallel : Execution::serial; }

/// Evaluates fn(i) for i in [0, count) and returns the results in index order.
template <class Fn>
auto map_runs_serial(std::uint64_t count, Fn&& fn) {
  using R = decltype(fn(std::uint64_t{0}));
  std::vector<R> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(fn(i));
  return out;
}

/// OpenMP version of map_runs_serial. Each slot is written by exactly one
/// thread; the first exception thrown by any iteration is rethrown.
template <class Fn>
auto map_runs_parallel(std::uint64_t count, int workers, Fn&& fn) {
  using R = decltype(fn(std::uint64_t{0}));
  std::vector<R> out(count);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 16) num_threads(workers)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::uint64_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

template <class Fn>
auto map_runs(std::uint64_t count, int workers, Fn&& fn) {
  if (execution_for(workers) == Execution::serial) return map_runs_serial(count, std::forward<Fn>(fn));
  return map_runs_parallel(count, workers, std::forward<Fn>(fn));
}

/// Sums per-index integer histograms. Integer addition is associative, so the
/// merged counts do not depend on the worker count.
template <class Fn>
std::vector<std::uint64_t> histogram_runs(std::uint64_t count, int workers, std::size_t bins, Fn&& bin_of) {
  std::vector<std::uint64_t> total(bins, 0);
  if (execution_for(workers) == Execution::serial) {
    for (std::uint64_t i = 0; i < count; ++i) ++total[bin_of(i)];
    return total;
  }
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel num_threads(workers)
  {
    std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) ++local[bin_of(static_cast<std::uint64_t>(i))];
#pragma omp critical(rilab_histogram_merge)
    for (std::size_t b = 0; b < bins; ++b) total[b] += local[b];
  }
  return total;
}

}  // namespace rilab
