#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prs {

enum class ExecMode { Serial, OpenMP };

// Threads actually used for a requested count (0 means "library default").
int effective_threads(int requested);

// Runs fn(i) for i in [0, n).  The two modes must be observationally
// identical: every writer targets a slot addressed by its own index, so the
// schedule cannot influence results.  Exceptions thrown by fn are captured
// and rethrown once after the loop.
template <typename Fn>
void parallel_for(std::size_t n, ExecMode mode, Fn&& fn) {
  if (mode == ExecMode::Serial || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      {
        if (!err) err = std::current_exception();
      }
    }
  }
#else
  for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
  if (err) std::rethrow_exception(err);
}

}  // namespace prs
