#pragma once

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace isoharm {

/// Worker count for grid scans; ISOHARM_THREADS overrides hardware detection.
inline unsigned worker_count() {
    if (const char* env = std::getenv("ISOHARM_THREADS")) {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end != env && n >= 1)
            return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Deterministic parallel loop over [0, n): contiguous blocks, one per worker.
/// fn(i) must touch only state owned by index i, so results are identical for
/// any worker count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || n < 2048) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    if (workers > n)
        workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = begin + chunk < n ? begin + chunk : n;
        if (begin >= end)
            break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i)
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace isoharm
