#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace sll {

// Worker cap: SLL_THREADS if set, otherwise hardware concurrency.
inline unsigned max_threads() {
    if (const char* env = std::getenv("SLL_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Runs work(block) for block = 0..nblocks-1 on a small pool. Each block must
// write only its own output slot; callers aggregate in block order, so the
// result is independent of scheduling.
inline void parallel_blocks(int nblocks, const std::function<void(int)>& work) {
    unsigned nthreads = max_threads();
    if (nthreads <= 1 || nblocks <= 1) {
        for (int b = 0; b < nblocks; ++b) work(b);
        return;
    }
    if (nthreads > static_cast<unsigned>(nblocks)) nthreads = static_cast<unsigned>(nblocks);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t]() {
            for (int b = static_cast<int>(t); b < nblocks; b += static_cast<int>(nthreads)) work(b);
        });
    }
    for (std::thread& th : pool) th.join();
}

}  // namespace sll
