// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <thread>
#include <vector>

namespace rosar {

/// Number of worker threads: `requested` if positive, otherwise hardware concurrency.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Static-partition parallel loop over [0, count).
/// Each index owns its output slot, so results are identical for any thread count.
template <typename Fn>
void parallel_for(long long count, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (count <= 0) return;
    if (threads <= 1 || count == 1) {
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
    if (threads > count) threads = static_cast<int>(count);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const long long chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const long long begin = t * chunk;
        const long long end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (long long i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace rosar
