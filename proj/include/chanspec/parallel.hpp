#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace chanspec {

/// Selects between the OpenMP kernels and their serial reference implementations.
enum class Execution { Serial, Parallel };

inline std::size_t thread_count()
{
#ifdef _OPENMP
    return static_cast<std::size_t>(omp_get_max_threads());
#else
    return 1;
#endif
}

inline void set_thread_count(std::size_t n)
{
#ifdef _OPENMP
    omp_set_num_threads(static_cast<int>(n));
#else
    (void)n;
#endif
}

} // namespace chanspec
