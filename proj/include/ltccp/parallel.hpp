#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace ltccp {

/// Selects between the OpenMP kernel and its serial reference. Both paths
/// reduce in the same fixed order and produce bit-identical results.
enum class Execution { serial, parallel };

/// Threads OpenMP would use for a parallel region (1 when built without OpenMP).
int max_threads();

/// Calls fn(i) for i in [0, n). Under Execution::parallel the iterations run
/// in a static OpenMP schedule; fn must only write to per-index storage.
/// Exceptions cannot cross an OpenMP region, so the lowest-index one is
/// rethrown after the loop.
template <typename Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
    if (exec == Execution::serial) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace ltccp
