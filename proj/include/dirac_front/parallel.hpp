#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dirac_front {

/// Thread cap from DIRAC_FRONT_THREADS (unset or invalid: runtime default).
int configured_threads();
/// Applies configured_threads() to the OpenMP runtime.
void apply_thread_limit();

/// Data-parallel loop over [0, n) with a static schedule.
template <class F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) body(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

/// Sum of term(i) over [0, n). Blocks have a fixed size and are combined in
/// index order, so the result does not depend on the thread count.
template <class F>
double blocked_sum(std::size_t n, F&& term) {
  constexpr std::size_t block = 4096;
  const std::size_t nblocks = (n + block - 1) / block;
  std::vector<double> partial(nblocks, 0.0);
  parallel_for(nblocks, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * block);
    double s = 0.0;
    for (std::size_t i = b * block; i < end; ++i) s += term(i);
    partial[b] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace dirac_front
