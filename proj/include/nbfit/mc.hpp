#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nbfit {

enum class ExecMode {
    Serial,    // reference path: plain loop, no OpenMP
    Parallel,  // OpenMP when compiled in; falls back to the serial loop
};

// Runs fn(i) for i in [0, count). Results must be written to per-index slots
// by the caller so that the outcome is identical for any worker count; the
// first exception (by index) is rethrown after the loop completes.
template <typename Fn>
void for_each_index(std::size_t count, ExecMode mode, Fn&& fn) {
    if (count == 0) return;
#ifdef _OPENMP
    if (mode == ExecMode::Parallel && count > 1) {
        std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < count; ++i) fn(i);
}

// Worker cap for subsequent Parallel loops; no effect without OpenMP.
inline void set_worker_cap(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

}  // namespace nbfit
