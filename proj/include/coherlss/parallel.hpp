#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace coherlss {

/// Runs fn(i) for i in [0, n) on up to `threads` OpenMP threads (0: runtime
/// default). fn must write to per-index slots only. If any call throws, the exception of the
/// smallest failing index is rethrown after the loop.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn)
{
    std::vector<std::exception_ptr> errors(n);
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace coherlss
