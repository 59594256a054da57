#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tfc {

/// Worker count: ENANTIO_TFC_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
unsigned worker_count();

/// Calls fn(i) for i in [0, n) on up to `workers` threads. Each index is
/// visited exactly once; callers write results into pre-sized slots so the
/// outcome does not depend on scheduling. The first exception thrown by any
/// call is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn)
{
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w)
        pool.emplace_back(body);
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace tfc
