#ifndef DECO_PARALLEL_HPP
#define DECO_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace deco {

namespace detail {
inline std::atomic<int>& thread_cap() {
    static std::atomic<int> cap{0}; // 0 = runtime default
    return cap;
}
} // namespace detail

/// Cap the number of OpenMP threads used by the grid kernels (0 = default).
inline void set_max_threads(int n) { detail::thread_cap().store(n < 0 ? 0 : n); }

inline int max_threads() {
#ifdef _OPENMP
    int cap = detail::thread_cap().load();
    int hw = omp_get_max_threads();
    return (cap > 0 && cap < hw) ? cap : hw;
#else
    return 1;
#endif
}

/// Serial reference driver: identical per-index work, plain loop.
template <class F>
void serial_for(std::size_t n, F&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

/// OpenMP driver over [0, n). Exceptions thrown by `body` are captured and
/// rethrown on the calling thread (the first one wins).
template <class F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
    int nthreads = max_threads();
    if (nthreads > 1 && n > 1) {
        std::exception_ptr err;
        std::atomic<bool> failed{false};
#pragma omp parallel for schedule(static) num_threads(nthreads)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#endif
    serial_for(n, body);
}

} // namespace deco

#endif
