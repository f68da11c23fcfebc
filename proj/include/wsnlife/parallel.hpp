#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wsnlife {

/// Worker count: an explicit positive request wins, then the WSNLIFE_THREADS
/// environment variable, then the OpenMP default.
int resolve_threads(int requested);

/// Runs body(block) for block in [0, blocks) across up to `threads` workers.
/// The first exception thrown by any block is rethrown on the caller.
template <typename Body>
void parallel_blocks(std::size_t blocks, int threads, Body&& body) {
  std::vector<std::exception_ptr> errors(blocks);
  const long long n = static_cast<long long>(blocks);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (long long b = 0; b < n; ++b) {
    try {
      body(static_cast<std::size_t>(b));
    } catch (...) {
      errors[static_cast<std::size_t>(b)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace wsnlife
