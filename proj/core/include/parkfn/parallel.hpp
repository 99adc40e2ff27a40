#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace parkfn {

// Runs fn over [0, total) split into contiguous chunks, one per worker.
// Callers keep results independent of the partition by writing each
// replicate's contribution to its own slot (or to integer tallies).
inline void parallel_chunks(long long total, int threads,
                            const std::function<void(long long, long long)>& fn) {
    threads = std::max(1, threads);
    const long long workers = std::min<long long>(threads, std::max<long long>(total, 1));
    if (workers <= 1) {
        fn(0, total);
        return;
    }
    const long long chunk = (total + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (long long w = 0; w < workers; ++w) {
        const long long begin = w * chunk;
        const long long end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

}  // namespace parkfn
