#pragma once

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zk {

// Execution policy for the data-parallel kernels.  Every parallel kernel in
// the library has a serial twin; tests and the bench tool run both and
// compare.  The default is picked once at startup.
enum class Exec { Serial, Parallel };

inline Exec& default_exec() {
  static Exec e =
#ifdef _OPENMP
      Exec::Parallel;
#else
      Exec::Serial;
#endif
  return e;
}

// chunked parallel for over [0, n)
template <typename Fn>
void parallel_for(uint64_t n, Exec exec, Fn&& fn) {
#ifdef _OPENMP
  if (exec == Exec::Parallel && n > 1) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < int64_t(n); ++i) fn(uint64_t(i));
    return;
  }
#endif
  (void)exec;
  for (uint64_t i = 0; i < n; ++i) fn(i);
}

// first index in [0, n) where pred holds, or n; the parallel version scans
// block windows with early exit between windows and returns the same index
// the serial scan would
template <typename Pred>
uint64_t parallel_find(uint64_t n, Exec exec, Pred&& pred) {
#ifdef _OPENMP
  if (exec == Exec::Parallel && n >= 4) {
    const uint64_t threads = uint64_t(omp_get_max_threads());
    uint64_t block = std::max<uint64_t>(1, n / (threads * 16));
    block = std::min<uint64_t>(block, 4096);
    const uint64_t nblocks = (n + block - 1) / block;
    const uint64_t window = threads * 8;
    for (uint64_t wb = 0; wb < nblocks; wb += window) {
      uint64_t we = std::min(nblocks, wb + window);
      uint64_t local = UINT64_MAX;
#pragma omp parallel for schedule(dynamic, 1) reduction(min : local)
      for (int64_t b = int64_t(wb); b < int64_t(we); ++b) {
        uint64_t lo = uint64_t(b) * block, hi = std::min(n, lo + block);
        for (uint64_t i = lo; i < hi; ++i)
          if (pred(i)) {
            local = std::min(local, i);
            break;
          }
      }
      if (local != UINT64_MAX) return local;
    }
    return n;
  }
#endif
  (void)exec;
  for (uint64_t i = 0; i < n; ++i)
    if (pred(i)) return i;
  return n;
}

}  // namespace zk
