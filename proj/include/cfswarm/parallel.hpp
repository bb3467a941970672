#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace cfswarm {

/// Run fn(i) for i in [0, n) on up to `threads` workers over contiguous
/// chunks. Callers must write only to per-index slots so the result is
/// identical for any worker count.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t n_workers = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const std::size_t chunk = (n + n_workers - 1) / n_workers;
    for (std::size_t w = 0; w < n_workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace cfswarm
