#pragma once

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace zkpark::kernels {

// Work below this many elements stays on the calling thread.
inline constexpr std::size_t kParallelThreshold = 1U << 10;

inline int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline bool use_parallel(std::size_t work) { return max_threads() > 1 && work >= kParallelThreshold; }

}  // namespace zkpark::kernels
