#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kdec {

/// Worker cap from KINETIC_DEC_THREADS; 0 when unset.
inline int thread_cap_from_env()
{
    const char* v = std::getenv("KINETIC_DEC_THREADS");
    if (v == nullptr || *v == '\0') {
        return 0;
    }
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1) {
        throw std::invalid_argument(std::string("KINETIC_DEC_THREADS must be a positive integer, got '") +
                                    v + "'");
    }
    return static_cast<int>(n);
}

/// Applies the environment cap; returns the worker count in effect.
inline int configure_threads()
{
    const int cap = thread_cap_from_env();
#ifdef _OPENMP
    if (cap > 0 && cap < omp_get_max_threads()) {
        omp_set_num_threads(cap);
    }
    return omp_get_max_threads();
#else
    (void)cap;
    return 1;
#endif
}

} // namespace kdec
