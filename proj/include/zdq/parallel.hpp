#pragma once

// Include this instead of <omp.h>; builds cleanly without OpenMP too.
#if defined(_OPENMP)
#include <omp.h>
#else
inline int omp_get_max_threads() { return 1; }
inline int omp_get_thread_num() { return 0; }
inline void omp_set_num_threads(int) {}
#endif

namespace zdq {

#if defined(_OPENMP)
inline constexpr bool openmp_enabled = true;
#else
inline constexpr bool openmp_enabled = false;
#endif

// 0 keeps the runtime default.
inline void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

inline int max_threads() { return omp_get_max_threads(); }

}  // namespace zdq
