#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace wfdual {

// Trajectory-level parallelism.  Work item i is a pure function of
// (config, parameters, stream seed i) and writes only its own output slot, so
// results are identical for any worker count.
inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 2 : hw;
}

// fn(begin, end): process the contiguous index range [begin, end)
inline void parallel_chunks(int n, const std::function<void(int, int)>& fn) {
    if (n <= 0) return;
    unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(n));
    if (workers <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    int chunk = (n + static_cast<int>(workers) - 1) / static_cast<int>(workers);
    for (unsigned w = 0; w < workers; ++w) {
        int begin = static_cast<int>(w) * chunk;
        int end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

inline void parallel_for_indexed(int n, const std::function<void(int)>& fn) {
    parallel_chunks(n, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) fn(i);
    });
}

}  // namespace wfdual
